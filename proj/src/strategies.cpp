#include "ltsim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ltsim/errors.hpp"
#include "ltsim/parallel_for.hpp"
#include "ltsim/waterfill.hpp"

namespace ltsim {

const char* strategy_name(StrategyKind kind) {
    return kind == StrategyKind::Lthm ? "lthm" : "ltsm";
}

StrategyConfig make_strategy(StrategyKind kind, int delay, double power_target,
                             double mu, ChannelPartition partition) {
    if (delay < 1) throw ValidationError("delay must be >= 1");
    if (power_target < 0.0) throw ValidationError("power target must be >= 0");
    StrategyConfig cfg;
    cfg.kind = kind;
    cfg.delay = delay;
    cfg.buffer_depth = (delay + 1) / 2;
    cfg.power_target = power_target;
    cfg.mu = mu;
    cfg.partition = std::move(partition);
    return cfg;
}

void BufferState::insert(int param, double value) {
    counts[static_cast<std::size_t>(param)] += 1;
    slots.push_back({param, value});
}

StoredMeasurement BufferState::take(int param, Rng& select_rng) {
    int have = counts[static_cast<std::size_t>(param)];
    // The selection stream is consumed only when the pick is ambiguous, so a
    // single-copy buffer replays identically regardless of what other
    // parameters did earlier in the block.
    int want = 0;
    if (have > 1) want = static_cast<int>(select_rng.next() % static_cast<std::uint64_t>(have));
    int seen = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].param != param) continue;
        if (seen == want) {
            StoredMeasurement out = slots[i];
            slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(i));
            counts[static_cast<std::size_t>(param)] -= 1;
            return out;
        }
        ++seen;
    }
    throw std::logic_error("buffer take on empty parameter");
}

std::optional<StoredMeasurement> select_measurement(const StrategyConfig& config,
                                                    BufferState& buffer, int set_index,
                                                    double magnitude, Rng& select_rng) {
    if (buffer.counts[static_cast<std::size_t>(set_index)] > 0)
        return buffer.take(set_index, select_rng);
    if (config.kind == StrategyKind::Lthm) return std::nullopt;
    if (buffer.total() == 0) return std::nullopt;
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int m = 0; m < static_cast<int>(buffer.counts.size()); ++m) {
        if (buffer.counts[static_cast<std::size_t>(m)] == 0) continue;
        double dist = std::abs(magnitude - config.partition.midpoint(m));
        if (dist < best_dist) { // strict: ties keep the smaller index
            best_dist = dist;
            best = m;
        }
    }
    return buffer.take(best, select_rng);
}

BlockSimResult run_block(const StrategyConfig& config, const CompositeSource& source,
                         const FadingChannel& channel, EstimatorMode mode,
                         const BlockStreams& streams) {
    const int params = source.size();
    const int depth = config.buffer_depth;

    BlockSimResult res;
    res.requested.assign(static_cast<std::size_t>(params), 0);
    res.transmitted_per.assign(static_cast<std::size_t>(params), 0);
    res.set_visits.assign(static_cast<std::size_t>(params), 0);

    // Fill phase: depth requests are measured and stored. Measurement i of a
    // block is globally the (first_ts + i)-th measurement; channel access i is
    // globally the (first_ts + i)-th access. Keying both streams by those
    // global indices (not by wall-clock slot) makes the pooled environment of
    // a long run independent of the block length, so runs differing only in
    // delay, strategy, power or estimator mode are paired draw for draw.
    BufferState buffer(params);
    for (int i = 0; i < depth; ++i) {
        long long ts = streams.first_ts + i;
        Rng env_req(mix_key(streams.env_key, static_cast<std::uint64_t>(ts), 0));
        int param = source.sample_request(env_req);
        double value = source.sigma(param) * draw_normal(env_req);
        buffer.insert(param, value);
        res.requested[static_cast<std::size_t>(param)] += 1;
    }

    Rng select_rng(mix_key(streams.select_key, static_cast<std::uint64_t>(streams.first_ts)));

    // Transmit phase: depth channel accesses drain the buffer.
    for (int i = 0; i < depth; ++i) {
        long long ts = streams.first_ts + i;
        Rng env_ch(mix_key(streams.env_key, static_cast<std::uint64_t>(ts), 1));
        double h = channel.sample(env_ch);
        int set_index = classify(config.partition, channel, h, env_ch);
        res.set_visits[static_cast<std::size_t>(set_index)] += 1;

        std::optional<StoredMeasurement> pick =
            select_measurement(config, buffer, set_index, h, select_rng);
        if (!pick) continue;

        double sigma = source.sigma(pick->param);
        double power = lthm_power_rule(config.mu, h, sigma);
        res.power_sum += power;
        res.transmitted += 1;
        res.transmitted_per[static_cast<std::size_t>(pick->param)] += 1;

        if (mode == EstimatorMode::Analytic) {
            res.error_sum += conditional_distortion(sigma * sigma, h, power);
        } else {
            double f = std::sqrt(power) / sigma;
            Rng noise(mix_key(streams.noise_key, static_cast<std::uint64_t>(ts)));
            double y = h * f * pick->value + draw_normal(noise);
            double g = mmse_gain(f, h, sigma * sigma);
            double err = pick->value - g * y;
            res.error_sum += err * err;
        }
    }

    // Whatever is still buffered has exceeded its deadline.
    for (const StoredMeasurement& left : buffer.slots) {
        res.dropped += 1;
        if (mode == EstimatorMode::Analytic) {
            double sigma = source.sigma(left.param);
            res.error_sum += sigma * sigma;
        } else {
            res.error_sum += left.value * left.value;
        }
    }
    return res;
}

namespace {

// Batch average power at a fixed mu over a fixed set of blocks. Deterministic
// in (root_seed, blocks, mu) and monotone increasing in mu: raising mu raises
// every per-slot power, so bisection is clean.
double measured_power(const StrategyConfig& cfg, const CompositeSource& source,
                      const FadingChannel& channel, std::uint64_t root_seed, int blocks,
                      int threads) {
    BlockStreams base;
    base.env_key = mix_key(root_seed, 0xCA11B8A7EULL, 1);
    base.select_key = mix_key(root_seed, 0xCA11B8A7EULL, 2);
    base.noise_key = mix_key(root_seed, 0xCA11B8A7EULL, 3);

    std::vector<double> power(static_cast<std::size_t>(blocks), 0.0);
    parallel_for(blocks, threads, [&](int b) {
        BlockStreams s = base;
        s.first_ts = static_cast<long long>(b) * cfg.buffer_depth;
        BlockSimResult r = run_block(cfg, source, channel, EstimatorMode::Analytic, s);
        power[static_cast<std::size_t>(b)] = r.power_sum;
    });
    double total = 0.0;
    for (double p : power) total += p;
    return total / (static_cast<double>(blocks) * cfg.buffer_depth);
}

} // namespace

CalibrationResult calibrate_mu(StrategyKind kind, int delay, const CompositeSource& source,
                               const FadingChannel& channel, const ChannelPartition& partition,
                               double power_target, std::uint64_t root_seed, int blocks,
                               double rel_tol, int threads) {
    if (blocks < 1) throw ValidationError("calibration needs at least one block");
    if (power_target <= 0.0) throw ValidationError("calibration needs a positive power target");

    StrategyConfig cfg = make_strategy(kind, delay, power_target, 0.0, partition);
    CalibrationResult out;

    auto eval = [&](double mu) {
        cfg.mu = mu;
        out.evaluations += 1;
        return measured_power(cfg, source, channel, root_seed, blocks, threads);
    };

    // Bracket: power is 0 at mu = 0 and grows without bound.
    double lo = 0.0;
    double hi = 1.0;
    double hi_val = eval(hi);
    int grow = 0;
    while (hi_val < power_target) {
        hi *= 2.0;
        hi_val = eval(hi);
        if (++grow > 200) throw NumericalError("calibration bracket failed to expand");
    }

    double mid = hi;
    double mid_val = hi_val;
    while (true) {
        double rel = std::abs(mid_val - power_target) / power_target;
        if (rel <= rel_tol) {
            out.within_tolerance = true;
            break;
        }
        if (hi - lo < 1e-6) break;
        mid = 0.5 * (lo + hi);
        mid_val = eval(mid);
        if (mid_val < power_target) lo = mid;
        else hi = mid;
    }
    out.mu = mid;
    out.achieved_power = mid_val;
    return out;
}

AsymptoticMatchedResult asymptotic_matched(const CompositeSource& source,
                                           const FadingChannel& channel, double avg_power) {
    if (!channel.is_discrete()) throw ValidationError("matched limit needs a discrete channel");
    const auto& states = channel.states();
    if (static_cast<int>(states.size()) != source.size())
        throw ValidationError("matched limit needs one channel state per parameter");
    if (avg_power < 0.0) throw ValidationError("matched limit needs a nonnegative power");

    const int n = source.size();
    double q = source.sigma(0) / states[0].magnitude;
    for (int m = 0; m < n; ++m) {
        double qm = source.sigma(m) / states[static_cast<std::size_t>(m)].magnitude;
        if (std::abs(qm - q) > 1e-9 * std::max(1.0, q))
            throw ValidationError("matched limit needs sigma_m / h_m constant across states");
        if (std::abs(source.request_prob(m) - states[static_cast<std::size_t>(m)].prob) > 1e-9)
            throw ValidationError("matched limit needs matching probabilities");
    }

    auto avg_power_at = [&](double mu) {
        double total = 0.0;
        for (const ChannelState& st : states) {
            double p = mu * q - 1.0 / (st.magnitude * st.magnitude);
            if (p > 0.0) total += st.prob * p;
        }
        return total;
    };

    Multiplier mu = solve_increasing(avg_power_at, avg_power);

    AsymptoticMatchedResult res;
    res.mu = mu.value;
    res.avg_power = mu.achieved;
    for (int m = 0; m < n; ++m) {
        const ChannelState& st = states[static_cast<std::size_t>(m)];
        double p = std::max(0.0, mu.value * q - 1.0 / (st.magnitude * st.magnitude));
        res.distortion += st.prob * conditional_distortion(source.variance(m), st.magnitude, p);
    }
    return res;
}

} // namespace ltsim
