#pragma once

#include <string>

#include "ltsim/model.hpp"

namespace ltsim {

struct Setup {
    CompositeSource source;
    FadingChannel channel;
};

// Four-parameter reference model shared by the canned experiments: variances
// {10, 5, 1, 0.5} requested with probabilities {0.1, 0.3, 0.4, 0.2}.
// The discrete channel mirrors it state for state (magnitudes are the square
// roots of the variances, same probabilities), which makes the matched-limit
// identities hold with ratio 1. The continuous variant keeps the source and
// uses a Rayleigh magnitude law with scale 3.
Setup reference_discrete_setup();
Setup reference_rayleigh_setup();

// Parse a JSON config document:
// {
//   "source":  {"variances": [..], "request_probs": [..]},
//   "channel": {"type": "discrete", "magnitudes": [..], "probs": [..]}
//            | {"type": "rayleigh", "scale": s}
// }
// Any unknown key anywhere is rejected; model validation errors surface as
// ConfigError so a bad file maps to the config exit code.
Setup parse_setup(const std::string& json_text);

Setup load_setup_file(const std::string& path);

} // namespace ltsim
