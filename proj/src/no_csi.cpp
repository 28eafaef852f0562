#include "ltsim/no_csi.hpp"

#include <cmath>

#include "ltsim/errors.hpp"
#include "ltsim/order_stats.hpp"

namespace ltsim {

namespace {

WeightedSupport law_support(const FadingChannel& channel) {
    // Rank 1 of a single draw is the base law itself; this reuses the
    // discrete-state / quadrature-grid representation in one place.
    return rank_support(channel, OrderStatistic{1, 1});
}

} // namespace

PsiCurve::PsiCurve(const FadingChannel& channel) {
    WeightedSupport support = law_support(channel);
    points_ = std::move(support.points);
    weights_ = std::move(support.weights);
}

double PsiCurve::value(double power) const {
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double h2 = points_[i] * points_[i];
        double denom = h2 * power + 1.0;
        total += weights_[i] * h2 / (denom * denom);
    }
    return total;
}

double PsiCurve::inverse(double y) const {
    if (y <= 0.0) throw NumericalError("psi inverse needs a positive value");
    if (y >= value(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    int grow = 0;
    while (value(hi) > y) {
        hi *= 2.0;
        if (++grow > 200) throw NumericalError("psi inverse bracket failed");
    }
    for (int i = 0; i < 200; ++i) {
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
        double mid = 0.5 * (lo + hi);
        if (value(mid) > y) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

AllocationTable no_csi_strict(const CompositeSource& source, const FadingChannel& channel,
                              double avg_power) {
    if (avg_power < 0.0) throw ValidationError("average power must be >= 0");
    PsiCurve psi(channel);
    const int params = source.size();

    auto power_of = [&](double lambda) {
        std::vector<double> p(static_cast<std::size_t>(params), 0.0);
        for (int m = 0; m < params; ++m)
            p[static_cast<std::size_t>(m)] = psi.inverse(lambda / source.variance(m));
        return p;
    };
    auto avg_power_of = [&](double lambda) {
        std::vector<double> p = power_of(lambda);
        double total = 0.0;
        for (int m = 0; m < params; ++m)
            total += source.request_prob(m) * p[static_cast<std::size_t>(m)];
        return total;
    };

    AllocationTable table;
    if (avg_power == 0.0) {
        // All powers clipped; any multiplier at or above variance(0) * psi(0)
        // satisfies the constraint, the boundary value is reported.
        table.multiplier = source.variance(0) * psi.value(0.0);
    } else {
        Multiplier lambda = solve_decreasing(avg_power_of, avg_power);
        table.multiplier = lambda.value;
    }

    std::vector<double> powers = power_of(table.multiplier);
    WeightedSupport law = rank_support(channel, OrderStatistic{1, 1});
    for (int m = 0; m < params; ++m) {
        double pm = powers[static_cast<std::size_t>(m)];
        table.param_power.push_back(pm);
        table.param_gain.push_back(std::sqrt(pm / source.variance(m)));
        table.average_power += source.request_prob(m) * pm;
        double dist = 0.0;
        for (std::size_t k = 0; k < law.points.size(); ++k)
            dist += law.weights[k] *
                    conditional_distortion(source.variance(m), law.points[k], pm);
        table.average_distortion += source.request_prob(m) * dist;
    }
    return table;
}

CounterexampleResult counterexample(const CounterexampleSpec& spec) {
    if (spec.p1 <= 0.0 || spec.p1 >= 1.0)
        throw ValidationError("request probability must lie in (0, 1)");
    if (spec.sigma1_sq <= 0.0) throw ValidationError("variance must be positive");
    if (spec.h1 <= 0.0) throw ValidationError("channel state must be positive");
    if (spec.p11 < 0.0 || spec.p12 < 0.0 || spec.p21 < 0.0)
        throw ValidationError("pair powers must be >= 0");

    const double p1 = spec.p1;
    const double p2 = 1.0 - spec.p1;
    double budget = 0.5 * (spec.p11 * p1 * p1 + (spec.p12 + spec.p21) * p1 * p2);
    if (std::abs(budget - spec.power) > 1e-9 * std::max(1.0, spec.power))
        throw ValidationError("pair powers do not meet the power budget");

    const double v = spec.sigma1_sq;
    const double h2 = spec.h1 * spec.h1;
    // Both-requests-for-parameter-1 pairs split p11 equally; only the draw
    // that lands on the live state carries signal.
    double common = p1 * p1 * (p1 * v / (h2 * spec.p11 / 2.0 + 1.0) + p2 * v);

    CounterexampleResult res;
    res.diagonal = common + (p1 * p2 / 2.0) *
                                (p1 * v / (h2 * spec.p12 + 1.0) +
                                 p1 * v / (h2 * spec.p21 + 1.0) + 2.0 * p2 * v);
    res.non_diagonal =
        common + (p1 * p2 / 2.0) *
                     (2.0 * p2 * p2 * v + p1 * p1 * v / (h2 * spec.p12 + 1.0) +
                      p1 * p1 * v / (h2 * spec.p21 + 1.0) +
                      2.0 * p1 * p2 * v / (h2 * spec.p12 / 2.0 + 1.0) +
                      2.0 * p1 * p2 * v / (h2 * spec.p21 / 2.0 + 1.0));
    return res;
}

TlbResult tlb_no_csi(const CompositeSource& source, const FadingChannel& channel,
                     double avg_power) {
    return tlb(source, channel, avg_power, false);
}

} // namespace ltsim
