#include "ltsim/bounds.hpp"

#include <cmath>
#include <limits>

#include "ltsim/errors.hpp"
#include "ltsim/parallel_for.hpp"
#include "ltsim/parallel_lt.hpp"
#include "ltsim/waterfill.hpp"

namespace ltsim {

TlbResult tlb(const CompositeSource& source, const FadingChannel& channel,
              double avg_power, bool encoder_csi) {
    if (avg_power < 0.0) throw ValidationError("average power must be >= 0");
    TlbResult res;
    if (encoder_csi) {
        CapacityResult cap = ergodic_capacity(channel, avg_power);
        res.alpha = cap.alpha;
        res.bits_per_use = cap.bits_per_use;
    } else {
        res.bits_per_use = constant_power_capacity(channel, avg_power);
    }
    RateAllocation rates = reverse_waterfill(source, res.bits_per_use);
    res.beta = rates.beta;
    res.distortion = rates.average_distortion;
    return res;
}

LlbResult llb(const CompositeSource& source, const FadingChannel& channel, int delay,
              double avg_power, int pool_max, int threads) {
    if (delay < 1) throw ValidationError("delay must be >= 1");
    if (pool_max < 1) throw ValidationError("pool cap must be >= 1");
    if (avg_power < 0.0) throw ValidationError("average power must be >= 0");

    LlbResult out;
    out.per_pool.assign(static_cast<std::size_t>(pool_max),
                        std::numeric_limits<double>::quiet_NaN());
    std::vector<double> multipliers(static_cast<std::size_t>(pool_max), 0.0);

    parallel_for(pool_max, threads, [&](int i) {
        ParallelProblem problem{source, channel, i + 1, delay - 1, avg_power};
        try {
            DiagonalSolution sol = solve_parallel(problem);
            out.per_pool[static_cast<std::size_t>(i)] = sol.average_distortion;
            multipliers[static_cast<std::size_t>(i)] = sol.multiplier;
        } catch (const NumericalError&) {
            // left NaN; the bound is taken over the pool sizes that solved
        }
    });

    out.best_pool = 0;
    for (int u = 1; u <= pool_max; ++u) {
        double v = out.per_pool[static_cast<std::size_t>(u - 1)];
        if (std::isnan(v)) continue;
        if (out.best_pool == 0 || v > out.distortion) {
            out.distortion = v;
            out.multiplier = multipliers[static_cast<std::size_t>(u - 1)];
            out.best_pool = u;
        }
    }
    if (out.best_pool == 0) throw NumericalError("no pool size solved");
    if (out.best_pool == pool_max && pool_max > 1) {
        double prev = out.per_pool[static_cast<std::size_t>(pool_max - 2)];
        out.capped = !std::isnan(prev) && out.distortion > prev;
    }
    return out;
}

} // namespace ltsim
