#include "ltsim/sim.hpp"

#include <cmath>
#include <limits>

#include "ltsim/errors.hpp"
#include "ltsim/parallel_for.hpp"

namespace ltsim {

BatchStats batch_means(const std::vector<double>& per_block) {
    BatchStats out;
    const int n = static_cast<int>(per_block.size());
    if (n == 0) {
        out.mean = std::numeric_limits<double>::quiet_NaN();
        out.ci95 = std::numeric_limits<double>::infinity();
        return out;
    }
    double total = 0.0;
    for (double v : per_block) total += v;
    out.mean = total / n;
    if (n < 30) {
        out.ci95 = std::numeric_limits<double>::infinity();
        return out;
    }
    const int batches = n < 100 ? n : 100;
    const int base = n / batches;
    const int extra = n % batches; // first `extra` batches take one more block
    std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
    int pos = 0;
    for (int k = 0; k < batches; ++k) {
        int len = base + (k < extra ? 1 : 0);
        double sum = 0.0;
        for (int i = 0; i < len; ++i) sum += per_block[static_cast<std::size_t>(pos + i)];
        means[static_cast<std::size_t>(k)] = sum / len;
        pos += len;
    }
    double var = 0.0;
    for (double m : means) var += (m - out.mean) * (m - out.mean);
    var /= (batches - 1);
    out.ci95 = 1.96 * std::sqrt(var / batches);
    return out;
}

namespace {

constexpr std::uint64_t kEvalSalt = 0xE7A15EEDULL;

EstimatePoint run_point(StrategyKind kind, int delay, double power_db, int blocks,
                        std::uint64_t seed, EstimatorMode mode, int threads,
                        const CompositeSource& source, const FadingChannel& channel,
                        const ChannelPartition& partition, int calibration_blocks) {
    EstimatePoint point;
    point.strategy = kind;
    point.delay = delay;
    point.power_db = power_db;
    point.blocks = blocks;
    point.seed = seed;

    const double power = std::pow(10.0, power_db / 10.0);
    StrategyConfig cfg = make_strategy(kind, delay, power, 0.0, partition);
    if (power > 0.0) {
        try {
            CalibrationResult cal = calibrate_mu(kind, delay, source, channel, partition,
                                                 power, seed, calibration_blocks, 0.01,
                                                 threads);
            cfg.mu = cal.mu;
            point.calibrated = true;
        } catch (const NumericalError&) {
            point.mse = std::numeric_limits<double>::quiet_NaN();
            point.avg_power = std::numeric_limits<double>::quiet_NaN();
            return point;
        }
    } else {
        point.calibrated = true;
    }
    point.mu = cfg.mu;

    BlockStreams base;
    base.env_key = mix_key(seed, kEvalSalt, 1);
    base.select_key = mix_key(seed, kEvalSalt, 2);
    base.noise_key = mix_key(seed, kEvalSalt, 3);

    std::vector<double> mse(static_cast<std::size_t>(blocks), 0.0);
    std::vector<double> pw(static_cast<std::size_t>(blocks), 0.0);
    parallel_for(blocks, threads, [&](int b) {
        BlockStreams s = base;
        s.first_ts = static_cast<long long>(b) * cfg.buffer_depth;
        BlockSimResult r = run_block(cfg, source, channel, mode, s);
        mse[static_cast<std::size_t>(b)] = r.error_sum / cfg.buffer_depth;
        pw[static_cast<std::size_t>(b)] = r.power_sum / cfg.buffer_depth;
    });

    BatchStats md = batch_means(mse);
    BatchStats pd = batch_means(pw);
    point.mse = md.mean;
    point.mse_ci95 = md.ci95;
    point.avg_power = pd.mean;
    point.power_ci95 = pd.ci95;
    return point;
}

} // namespace

std::vector<EstimatePoint> run_sweep(const SweepSpec& spec, const CompositeSource& source,
                                     const FadingChannel& channel) {
    if (spec.strategies.empty() || spec.delays.empty() || spec.power_db.empty())
        throw ValidationError("sweep grids must be non-empty");
    if (spec.blocks < 1) throw ValidationError("sweep needs at least one block");

    ChannelPartition partition = build_partition(source, channel);
    std::vector<EstimatePoint> points;
    for (StrategyKind kind : spec.strategies)
        for (int delay : spec.delays)
            for (double db : spec.power_db)
                points.push_back(run_point(kind, delay, db, spec.blocks, spec.seed,
                                           spec.mode, spec.threads, source, channel,
                                           partition, spec.calibration_blocks));
    return points;
}

ModeComparison compare_modes(StrategyKind kind, int delay, double power_db, int blocks,
                             std::uint64_t seed, const CompositeSource& source,
                             const FadingChannel& channel, int threads) {
    ChannelPartition partition = build_partition(source, channel);
    ModeComparison cmp;
    cmp.analytic = run_point(kind, delay, power_db, blocks, seed, EstimatorMode::Analytic,
                             threads, source, channel, partition, 20000);
    cmp.sampled = run_point(kind, delay, power_db, blocks, seed, EstimatorMode::NoiseSampled,
                            threads, source, channel, partition, 20000);
    cmp.difference = cmp.analytic.mse - cmp.sampled.mse;
    cmp.combined_ci = std::sqrt(cmp.analytic.mse_ci95 * cmp.analytic.mse_ci95 +
                                cmp.sampled.mse_ci95 * cmp.sampled.mse_ci95);
    cmp.agree = std::abs(cmp.difference) <= 4.0 * cmp.combined_ci;
    return cmp;
}

} // namespace ltsim
