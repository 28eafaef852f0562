#pragma once

#include <vector>

#include "ltsim/model.hpp"

namespace ltsim {

struct TlbResult {
    double bits_per_use = 0.0;
    double alpha = 0.0; // encoder water level; 0 when the encoder lacks channel knowledge
    double beta = 0.0;  // distortion floor of the reverse water-fill
    double distortion = 0.0;
};

// Delay-free digital benchmark: source coding at the ergodic capacity, rates
// split across parameters by reverse water-filling. Valid for any strategy,
// so every measured distortion must sit above it.
TlbResult tlb(const CompositeSource& source, const FadingChannel& channel,
              double avg_power, bool encoder_csi = true);

struct LlbResult {
    double distortion = 0.0;
    double multiplier = 0.0; // water-filling multiplier at the best pool size
    int best_pool = 0;
    bool capped = false; // best pool sits on pool_max with the curve still rising
    std::vector<double> per_pool; // index u-1 holds the pool-size-u value; NaN on solver failure
};

// Linear-scheme lower bound at delay d: a genie pools u future measurements
// and non-causally matches them to the strongest u of the next u + d - 1
// channels; the bound is the largest such distortion over pool sizes
// u in [1, pool_max]. The search is exhaustive (the curve is not known to be
// unimodal) and `capped` flags a maximizer sitting on the cap, where the true
// supremum may be larger.
LlbResult llb(const CompositeSource& source, const FadingChannel& channel, int delay,
              double avg_power, int pool_max = 64, int threads = 0);

} // namespace ltsim
