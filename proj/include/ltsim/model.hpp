#pragma once

#include <vector>

#include "ltsim/rng.hpp"

namespace ltsim {

// Composite Gaussian source: each time slot one of J zero-mean Gaussian
// parameters is requested. Variances are stored strictly descending; index 0
// is always the largest variance. Request probabilities are positive and sum
// to one (within 1e-9; they are renormalized exactly on construction).
class CompositeSource {
public:
    CompositeSource(std::vector<double> variances, std::vector<double> request_probs);

    int size() const { return static_cast<int>(variances_.size()); }
    double variance(int m) const { return variances_[m]; }
    double sigma(int m) const { return sigmas_[m]; }
    double request_prob(int m) const { return probs_[m]; }
    const std::vector<double>& variances() const { return variances_; }
    const std::vector<double>& request_probs() const { return probs_; }

    double mean_variance() const; // E[sigma_m^2], the zero-power distortion

    // Inverse-CDF draw of a parameter index; consumes one uniform.
    int sample_request(Rng& rng) const;

private:
    std::vector<double> variances_;
    std::vector<double> sigmas_;
    std::vector<double> probs_;
    std::vector<double> cum_;
};

struct ChannelState {
    double magnitude = 0.0;
    double prob = 0.0;
};

// Memoryless fading channel magnitude law. Two variants:
//   discrete  - finite set of magnitudes, stored strictly descending;
//   rayleigh  - F(x) = 1 - exp(-x^2 / (2 scale^2)).
class FadingChannel {
public:
    static FadingChannel discrete(std::vector<ChannelState> states);
    static FadingChannel rayleigh(double scale);

    bool is_discrete() const { return discrete_; }
    const std::vector<ChannelState>& states() const; // discrete only
    double scale() const;                            // rayleigh only

    double cdf(double x) const;
    // Generalized inverse: smallest magnitude x with F(x) >= u. Exact inverse
    // for the rayleigh law; a state magnitude for the discrete law.
    double quantile(double u) const;
    double sample(Rng& rng) const; // consumes one uniform
    double mean_square() const;    // E |h|^2

    // Exact-match state lookup for magnitudes produced by sample().
    int state_index(double magnitude) const;

private:
    FadingChannel() = default;
    bool discrete_ = false;
    std::vector<ChannelState> states_;
    std::vector<double> cum_ascending_; // CDF at states in ascending magnitude order
    double scale_ = 0.0;
};

// Channel set partition used by the matching strategies: one set per source
// parameter, set m carrying probability mass exactly p_M(m), ordered so that
// stronger channels serve larger variances.
//
// Continuous law: set m is the half-open magnitude interval
// [boundary(m+1), boundary(m)), with boundary(0) = +inf. A magnitude equal to
// a finite boundary therefore lands in the adjacent larger-variance set.
//
// Discrete law: states are consumed greedily in descending magnitude order,
// always filling the smallest-index set that still needs mass. A state whose
// probability straddles a set boundary is split: classification of that state
// becomes randomized with the recorded conditional probabilities ("virtual"
// sub-states, which inherit the real state's magnitude).
//
// The representative magnitude midpoint(m) is the mass midpoint of the set for
// a continuous law, and the arithmetic mean of the member magnitudes
// (virtual members included) for a discrete law.
class ChannelPartition {
public:
    struct Share {
        int set = 0;
        double conditional_prob = 0.0; // P(set | state)
    };

    int sets() const { return static_cast<int>(set_probs_.size()); }
    double set_prob(int m) const { return set_probs_[m]; }
    double midpoint(int m) const { return midpoints_[m]; }
    bool continuous() const { return !boundaries_.empty(); }
    double boundary(int i) const; // continuous only; i in [0, sets()]
    const std::vector<std::vector<Share>>& state_shares() const { return state_shares_; }
    bool has_virtual_split() const { return has_split_; }

    friend ChannelPartition build_partition(const CompositeSource&, const FadingChannel&);

private:
    std::vector<double> set_probs_;
    std::vector<double> midpoints_;
    std::vector<double> boundaries_;                // continuous: H'_0..H'_J descending
    std::vector<std::vector<Share>> state_shares_;  // discrete: per state, its set shares
    bool has_split_ = false;
};

ChannelPartition build_partition(const CompositeSource& source, const FadingChannel& channel);

// Map a sampled magnitude to its set index. Consumes one uniform only when a
// split discrete state requires a randomized assignment.
int classify(const ChannelPartition& partition, const FadingChannel& channel,
             double magnitude, Rng& rng);

struct StepSample {
    int param = 0;
    double value = 0.0;     // realized measurement
    double magnitude = 0.0; // realized |h|
};

// One time slot of the environment: requested parameter, measurement value,
// channel magnitude. Request and channel are independent.
StepSample sample_step(const CompositeSource& source, const FadingChannel& channel, Rng& rng);

} // namespace ltsim
