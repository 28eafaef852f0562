#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ltsim/model.hpp"

namespace ltsim {

enum class StrategyKind {
    Lthm, // hard matching: transmit only when the channel set has a stored measurement
    Ltsm, // soft matching: otherwise send the stored parameter whose set midpoint is nearest
};

const char* strategy_name(StrategyKind kind);

// Buffered matching strategy under an end-to-end delay constraint of `delay`
// slots. Measurements are collected in blocks of `buffer_depth` and must be
// transmitted (at most once each) within the following buffer_depth channel
// accesses; leftovers expire at their full variance.
//
// buffer_depth = floor((delay + 1) / 2): for odd delay the worst-case latency
// 2*buffer_depth - 1 meets the constraint exactly; for even delay rounding up
// would overshoot it, so the floor is used and the last slot goes unused.
struct StrategyConfig {
    StrategyKind kind = StrategyKind::Lthm;
    int delay = 1;
    int buffer_depth = 1;
    double power_target = 0.0;
    double mu = 0.0; // power-rule multiplier, normally set by calibrate_mu
    ChannelPartition partition;
};

StrategyConfig make_strategy(StrategyKind kind, int delay, double power_target,
                             double mu, ChannelPartition partition);

struct StoredMeasurement {
    int param = 0;
    double value = 0.0;
};

struct BufferState {
    explicit BufferState(int params) : counts(params, 0) {}
    std::vector<int> counts; // per parameter
    std::vector<StoredMeasurement> slots;

    int total() const { return static_cast<int>(slots.size()); }
    void insert(int param, double value);
    // Remove and return a uniformly chosen stored measurement of `param`.
    StoredMeasurement take(int param, Rng& select_rng);
};

// Per-access selection. Hard matching returns nothing when the channel set
// has no stored measurement; soft matching then falls back to the stored
// parameter whose set midpoint is nearest to the realized magnitude (ties to
// the smallest, i.e. largest-variance, index). The chosen measurement is
// removed from the buffer.
std::optional<StoredMeasurement> select_measurement(const StrategyConfig& config,
                                                    BufferState& buffer, int set_index,
                                                    double magnitude, Rng& select_rng);

enum class EstimatorMode {
    Analytic,     // accumulate conditional expected squared error per slot
    NoiseSampled, // realize channel noise and decoder output per slot
};

// Stream addressing for one block. Environment draws (request, measurement
// value, magnitude, classification) are keyed per global time slot, so runs
// that differ only in strategy, delay, power or estimator mode see identical
// environments and can be compared pairwise.
struct BlockStreams {
    std::uint64_t env_key = 0;
    std::uint64_t select_key = 0;
    std::uint64_t noise_key = 0;
    long long first_ts = 0;
};

struct BlockSimResult {
    double power_sum = 0.0;   // total transmit power over the block's accesses
    double error_sum = 0.0;   // total squared-error contribution of the block's measurements
    int transmitted = 0;
    int dropped = 0;
    std::vector<int> requested;       // per parameter
    std::vector<int> transmitted_per; // per parameter
    std::vector<int> set_visits;      // per channel set
};

BlockSimResult run_block(const StrategyConfig& config, const CompositeSource& source,
                         const FadingChannel& channel, EstimatorMode mode,
                         const BlockStreams& streams);

struct CalibrationResult {
    double mu = 0.0;
    double achieved_power = 0.0;
    int evaluations = 0;
    bool within_tolerance = false;
};

// Stochastic bisection of mu against the measured average power of a fixed
// batch of blocks (common random numbers make the batch average monotone in
// mu). Stops when |achieved - target| / target <= rel_tol or the bracket
// width falls below 1e-6. Calibration streams are keyed separately from
// evaluation streams.
CalibrationResult calibrate_mu(StrategyKind kind, int delay, const CompositeSource& source,
                               const FadingChannel& channel, const ChannelPartition& partition,
                               double power_target, std::uint64_t root_seed, int blocks,
                               double rel_tol = 0.01, int threads = 0);

struct AsymptoticMatchedResult {
    double mu = 0.0;
    double avg_power = 0.0;
    double distortion = 0.0;
};

// Infinite-buffer limit for a discrete channel matched to the source: equal
// set and request probabilities and a common ratio q = sigma_m / h_m. Every
// measurement is eventually sent on its matched state, so the limit is the
// deterministic allocation P(m) = [mu q - 1/h_m^2]^+ with E[P] = avg_power.
AsymptoticMatchedResult asymptotic_matched(const CompositeSource& source,
                                           const FadingChannel& channel, double avg_power);

} // namespace ltsim
