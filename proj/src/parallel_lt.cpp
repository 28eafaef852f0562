#include "ltsim/parallel_lt.hpp"

#include <cmath>
#include <stdexcept>

#include "ltsim/order_stats.hpp"
#include "ltsim/waterfill.hpp"

namespace ltsim {

namespace {

void check_problem(const ParallelProblem& p) {
    if (p.n < 1 || p.rank_offset < 0)
        throw std::invalid_argument("parallel: need n >= 1 and rank_offset >= 0");
    if (!(p.avg_power >= 0.0))
        throw std::invalid_argument("parallel: average power must be >= 0");
}

// pmf of the rank-t variance class, returned in storage order (descending
// variance). Ranks are ascending in variance, so the base law is reversed
// before and after the order-statistic transform.
std::vector<double> variance_rank_pmf(const CompositeSource& src, int n, int t) {
    const int j = src.size();
    std::vector<double> asc(j);
    for (int m = 0; m < j; ++m) asc[m] = src.request_prob(j - 1 - m);
    std::vector<double> pmf = discrete_order_pmf(asc, {n, t});
    std::vector<double> out(j);
    for (int m = 0; m < j; ++m) out[m] = pmf[j - 1 - m];
    return out;
}

// Weights pooled over ranks: W[m][k] = (1/n) sum_t pmf_t[m] * w_{t+off}[k].
// The water-filling cell rule depends only on (sigma_m, h_k), so the single
// multiplier can be bisected against this pooled measure instead of
// re-walking every rank.
struct PooledWeights {
    std::vector<double> points;            // channel support, ascending
    std::vector<std::vector<double>> w;    // [param][point]
};

PooledWeights pool(const ParallelProblem& p, const std::vector<std::vector<double>>& pmfs,
                   const RankFamily& fam) {
    PooledWeights out;
    out.points = fam.points;
    out.w.assign(p.source.size(), std::vector<double>(out.points.size(), 0.0));
    for (int t = 1; t <= p.n; ++t) {
        const std::vector<double>& pm = pmfs[static_cast<std::size_t>(t - 1)];
        const std::vector<double>& chw = fam.weights[static_cast<std::size_t>(t - 1)];
        for (int m = 0; m < p.source.size(); ++m) {
            if (pm[m] == 0.0) continue;
            std::vector<double>& row = out.w[m];
            for (std::size_t k = 0; k < chw.size(); ++k)
                row[k] += pm[m] * chw[k];
        }
    }
    const double inv = 1.0 / p.n;
    for (auto& row : out.w)
        for (double& x : row) x *= inv;
    return out;
}

} // namespace

DiagonalSolution solve_parallel(const ParallelProblem& p) {
    check_problem(p);
    const int cbar = p.n + p.rank_offset;
    std::vector<std::vector<double>> pmfs;
    for (int t = 1; t <= p.n; ++t) pmfs.push_back(variance_rank_pmf(p.source, p.n, t));
    const RankFamily fam =
        rank_support_family(p.channel, cbar, 1 + p.rank_offset, p.n + p.rank_offset);
    const PooledWeights pw = pool(p, pmfs, fam);
    const int j = p.source.size();

    const auto avg_p = [&](double delta) {
        double acc = 0.0;
        for (int m = 0; m < j; ++m) {
            const double s = p.source.sigma(m);
            const std::vector<double>& row = pw.w[m];
            for (std::size_t k = 0; k < pw.points.size(); ++k)
                acc += row[k] * strict_power(delta, pw.points[k], s);
        }
        return acc;
    };

    DiagonalSolution out;
    const Multiplier mult = solve_increasing(avg_p, p.avg_power);
    out.multiplier = mult.value;
    out.average_power = mult.achieved;
    double d = 0.0;
    for (int m = 0; m < j; ++m) {
        const double s = p.source.sigma(m);
        const std::vector<double>& row = pw.w[m];
        for (std::size_t k = 0; k < pw.points.size(); ++k)
            d += row[k] * strict_distortion(mult.value, pw.points[k], s);
    }
    out.average_distortion = d;

    out.rank_power.resize(p.n);
    out.rank_distortion.resize(p.n);
    for (int t = 1; t <= p.n; ++t) {
        const std::vector<double>& pm = pmfs[static_cast<std::size_t>(t - 1)];
        const std::vector<double>& chw = fam.weights[static_cast<std::size_t>(t - 1)];
        double tp = 0.0, td = 0.0;
        for (int m = 0; m < j; ++m) {
            if (pm[m] == 0.0) continue;
            const double s = p.source.sigma(m);
            for (std::size_t k = 0; k < fam.points.size(); ++k) {
                tp += pm[m] * chw[k] * strict_power(mult.value, fam.points[k], s);
                td += pm[m] * chw[k] * strict_distortion(mult.value, fam.points[k], s);
            }
        }
        out.rank_power[t - 1] = tp;
        out.rank_distortion[t - 1] = td;
    }
    return out;
}

MappingResult evaluate_fixed_mapping(const ParallelProblem& p,
                                     const std::vector<RankGain>& gains) {
    check_problem(p);
    if (static_cast<int>(gains.size()) != p.n)
        throw std::invalid_argument("parallel: need one gain function per rank");
    const int j = p.source.size();
    const int cbar = p.n + p.rank_offset;
    const RankFamily fam =
        rank_support_family(p.channel, cbar, 1 + p.rank_offset, p.n + p.rank_offset);
    MappingResult out;
    for (int t = 1; t <= p.n; ++t) {
        const std::vector<double> pm = variance_rank_pmf(p.source, p.n, t);
        const std::vector<double>& chw = fam.weights[static_cast<std::size_t>(t - 1)];
        for (int m = 0; m < j; ++m) {
            if (pm[m] == 0.0) continue;
            const double s = p.source.sigma(m);
            const double var = s * s;
            for (std::size_t k = 0; k < fam.points.size(); ++k) {
                const double h = fam.points[k];
                const double f = gains[static_cast<std::size_t>(t - 1)](h, s);
                if (!(f >= 0.0))
                    throw std::invalid_argument("parallel: encoder gains must be >= 0");
                const double w = pm[m] * chw[k];
                out.average_power += w * f * f * var;
                out.average_distortion += w * var / (h * h * f * f * var + 1.0);
            }
        }
    }
    out.average_power /= p.n;
    out.average_distortion /= p.n;
    return out;
}

} // namespace ltsim
