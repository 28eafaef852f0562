#pragma once

#include <stdexcept>

namespace ltsim {

// Malformed or inconsistent run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bisection bracket/iteration failures and other solver breakdowns (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cross-check disagreement, e.g. estimator modes drifting apart (CLI exit code 4).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ltsim
