#pragma once

#include <cstdint>
#include <vector>

#include "ltsim/model.hpp"
#include "ltsim/strategies.hpp"

namespace ltsim {

struct SweepSpec {
    std::vector<StrategyKind> strategies;
    std::vector<int> delays;
    std::vector<double> power_db;
    int blocks = 100000;
    int calibration_blocks = 20000;
    std::uint64_t seed = 1;
    EstimatorMode mode = EstimatorMode::Analytic;
    int threads = 0;
};

// One grid point of a sweep. mse averages squared error per requested
// measurement (dropped ones included at full variance); avg_power averages
// transmit power per channel access. CI half-widths are 95% batch-means
// values, infinite below 30 blocks. `calibrated` is false when the power
// calibration failed at this point; the estimates are then NaN.
struct EstimatePoint {
    StrategyKind strategy = StrategyKind::Lthm;
    int delay = 0;
    double power_db = 0.0;
    double mse = 0.0;
    double mse_ci95 = 0.0;
    double avg_power = 0.0;
    double power_ci95 = 0.0;
    double mu = 0.0;
    int blocks = 0;
    std::uint64_t seed = 0;
    bool calibrated = false;
};

// Mean and 95% half-width of per-block values: up to 100 near-equal
// contiguous batches, normal approximation on the batch means. Fewer than 30
// blocks cannot support the batch count, so the half-width is infinite.
struct BatchStats {
    double mean = 0.0;
    double ci95 = 0.0;
};

BatchStats batch_means(const std::vector<double>& per_block);

// Full strategy x delay x power grid. Environment streams are keyed by the
// root seed and global slot indices only, so every grid point sees paired
// draws; calibration streams are keyed apart from evaluation streams.
// A failed calibration marks its point and the sweep continues.
std::vector<EstimatePoint> run_sweep(const SweepSpec& spec, const CompositeSource& source,
                                     const FadingChannel& channel);

struct ModeComparison {
    EstimatePoint analytic;
    EstimatePoint sampled;
    double difference = 0.0;
    double combined_ci = 0.0; // root-sum-square of the two half-widths
    bool agree = false;       // |difference| <= 4 * combined_ci
};

// Same grid point estimated twice from identical environment draws: once with
// per-slot conditional expected error, once with realized noise and decoding.
// The two estimators share their mean, so disagreement beyond 4 combined CIs
// flags a defect.
ModeComparison compare_modes(StrategyKind kind, int delay, double power_db, int blocks,
                             std::uint64_t seed, const CompositeSource& source,
                             const FadingChannel& channel, int threads = 0);

} // namespace ltsim
