#include "ltsim/waterfill.hpp"

#include <algorithm>
#include <cmath>

#include "ltsim/errors.hpp"
#include "ltsim/order_stats.hpp"

namespace ltsim {

namespace {
constexpr double kRelTol = 1e-9;
constexpr int kMaxIters = 200;
} // namespace

Multiplier solve_increasing(const std::function<double(double)>& fn, double target) {
    Multiplier out;
    out.target = target;
    if (fn(0.0) >= target) {
        out.value = 0.0;
        out.achieved = fn(0.0);
        return out;
    }
    double lo = 0.0, hi = 1.0;
    int grow = 0;
    while (fn(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++grow > kMaxIters)
            throw NumericalError("bisection: increasing constraint never reached target");
    }
    int it = 0;
    while (hi - lo > kRelTol * std::max(1.0, hi) && it < kMaxIters) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) < target ? lo : hi) = mid;
        ++it;
    }
    out.value = 0.5 * (lo + hi);
    out.achieved = fn(out.value);
    out.iterations = it;
    return out;
}

Multiplier solve_decreasing(const std::function<double(double)>& fn, double target) {
    Multiplier out;
    out.target = target;
    double lo = 1.0, hi = 1.0;
    int grow = 0;
    while (fn(lo) < target) { // walk left until at or above target
        lo *= 0.5;
        if (++grow > kMaxIters)
            throw NumericalError("bisection: decreasing constraint never reached target");
    }
    grow = 0;
    if (lo == 1.0) {
        while (fn(hi) > target) {
            hi *= 2.0;
            if (++grow > kMaxIters)
                throw NumericalError("bisection: decreasing constraint never fell to target");
        }
    } else {
        hi = 2.0 * lo;
    }
    int it = 0;
    while (hi - lo > kRelTol * std::max(1.0, hi) && it < kMaxIters) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) > target ? lo : hi) = mid;
        ++it;
    }
    out.value = 0.5 * (lo + hi);
    out.achieved = fn(out.value);
    out.iterations = it;
    return out;
}

double mmse_gain(double encoder_gain, double magnitude, double variance) {
    return magnitude * encoder_gain * variance /
           (magnitude * magnitude * encoder_gain * encoder_gain * variance + 1.0);
}

double strict_gain(double lambda, double magnitude, double sigma) {
    const double hs = magnitude * sigma;
    const double v = lambda / hs - 1.0 / (hs * hs);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double strict_power(double lambda, double magnitude, double sigma) {
    const double v = lambda - 1.0 / (magnitude * sigma);
    return v > 0.0 ? (sigma / magnitude) * v : 0.0;
}

double strict_distortion(double lambda, double magnitude, double sigma) {
    const double cap = magnitude * sigma;
    const double inv = lambda > 0.0 ? 1.0 / lambda : cap;
    return (sigma / magnitude) * std::min(inv, cap);
}

double lthm_power_rule(double mu, double magnitude, double sigma) {
    const double v = mu * sigma / magnitude - 1.0 / (magnitude * magnitude);
    return v > 0.0 ? v : 0.0;
}

double conditional_distortion(double variance, double magnitude, double power) {
    return variance / (magnitude * magnitude * power + 1.0);
}

AllocationTable strict_delay_optimal(const CompositeSource& source,
                                     const FadingChannel& channel, double avg_power) {
    if (!(avg_power >= 0.0))
        throw std::invalid_argument("strict_delay_optimal: average power must be >= 0");
    const WeightedSupport sup = rank_support(channel, {1, 1});
    const int j = source.size();

    const auto avg_p = [&](double lambda) {
        double acc = 0.0;
        for (int m = 0; m < j; ++m) {
            const double s = source.sigma(m);
            const double pm = source.request_prob(m);
            for (std::size_t k = 0; k < sup.points.size(); ++k)
                acc += pm * sup.weights[k] * strict_power(lambda, sup.points[k], s);
        }
        return acc;
    };

    AllocationTable table;
    const Multiplier mult = solve_increasing(avg_p, avg_power);
    table.multiplier = mult.value;
    table.average_power = mult.achieved;
    double d = 0.0;
    for (int m = 0; m < j; ++m) {
        const double s = source.sigma(m);
        const double pm = source.request_prob(m);
        for (std::size_t k = 0; k < sup.points.size(); ++k)
            d += pm * sup.weights[k] * strict_distortion(mult.value, sup.points[k], s);
    }
    table.average_distortion = d;

    if (channel.is_discrete()) {
        const auto& states = channel.states();
        table.entries.reserve(states.size() * static_cast<std::size_t>(j));
        for (std::size_t k = 0; k < states.size(); ++k) {
            for (int m = 0; m < j; ++m) {
                AllocationEntry e;
                e.magnitude = states[k].magnitude;
                e.param = m;
                e.weight = states[k].prob * source.request_prob(m);
                e.power = strict_power(mult.value, e.magnitude, source.sigma(m));
                e.distortion = strict_distortion(mult.value, e.magnitude, source.sigma(m));
                e.encoder_gain = strict_gain(mult.value, e.magnitude, source.sigma(m));
                table.entries.push_back(e);
            }
        }
    }
    return table;
}

CapacityResult ergodic_capacity(const FadingChannel& channel, double avg_power) {
    if (!(avg_power >= 0.0))
        throw std::invalid_argument("ergodic_capacity: average power must be >= 0");
    const WeightedSupport sup = rank_support(channel, {1, 1});
    const auto avg_p = [&](double alpha) {
        double acc = 0.0;
        for (std::size_t k = 0; k < sup.points.size(); ++k) {
            const double h2 = sup.points[k] * sup.points[k];
            acc += sup.weights[k] * std::max(alpha - 1.0 / h2, 0.0);
        }
        return acc;
    };
    const Multiplier mult = solve_increasing(avg_p, avg_power);
    CapacityResult out;
    out.alpha = mult.value;
    double c = 0.0;
    for (std::size_t k = 0; k < sup.points.size(); ++k) {
        const double h2 = sup.points[k] * sup.points[k];
        const double p = std::max(mult.value - 1.0 / h2, 0.0);
        c += sup.weights[k] * 0.5 * std::log2(1.0 + h2 * p);
    }
    out.bits_per_use = c;
    return out;
}

double constant_power_capacity(const FadingChannel& channel, double avg_power) {
    if (!(avg_power >= 0.0))
        throw std::invalid_argument("constant_power_capacity: average power must be >= 0");
    const WeightedSupport sup = rank_support(channel, {1, 1});
    double c = 0.0;
    for (std::size_t k = 0; k < sup.points.size(); ++k) {
        const double h2 = sup.points[k] * sup.points[k];
        c += sup.weights[k] * 0.5 * std::log2(1.0 + h2 * avg_power);
    }
    return c;
}

RateAllocation reverse_waterfill(const CompositeSource& source, double avg_rate_bits) {
    if (!(avg_rate_bits >= 0.0))
        throw std::invalid_argument("reverse_waterfill: average rate must be >= 0");
    const int j = source.size();
    const auto rate = [&](double beta) {
        double acc = 0.0;
        for (int m = 0; m < j; ++m)
            acc += source.request_prob(m) *
                   0.5 * std::max(std::log2(source.variance(m) / beta), 0.0);
        return acc;
    };
    RateAllocation out;
    if (avg_rate_bits == 0.0) {
        out.beta = source.variance(0); // largest variance: every rate already zero
    } else {
        out.beta = solve_decreasing(rate, avg_rate_bits).value;
    }
    out.rates.resize(j);
    out.distortions.resize(j);
    double d = 0.0;
    for (int m = 0; m < j; ++m) {
        out.rates[m] = 0.5 * std::max(std::log2(source.variance(m) / out.beta), 0.0);
        out.distortions[m] = std::min(out.beta, source.variance(m));
        d += source.request_prob(m) * out.distortions[m];
    }
    out.average_distortion = d;
    return out;
}

} // namespace ltsim
