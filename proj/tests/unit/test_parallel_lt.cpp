#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "ltsim/parallel_lt.hpp"
#include "ltsim/rng.hpp"
#include "ltsim/waterfill.hpp"

using namespace ltsim;

namespace {

std::vector<double> enumerated_rank_pmf(const std::vector<double>& pmf, int n, int t) {
    std::vector<double> out(pmf.size(), 0.0);
    std::vector<int> idx(n, 0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= pmf[idx[i]];
        std::vector<int> sorted(idx);
        std::sort(sorted.begin(), sorted.end());
        out[sorted[t - 1]] += w;
        int pos = n - 1;
        while (pos >= 0 && ++idx[pos] == static_cast<int>(pmf.size())) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

struct OracleCell {
    double weight = 0.0;
    double sigma = 0.0;
    double magnitude = 0.0;
};

// independent reconstruction of the pooled diagonal problem: enumerate the
// rank laws, pair variance rank t with channel rank t+offset, then bisect the
// shared multiplier against the power budget
struct OracleSolution {
    double multiplier = 0.0;
    double distortion = 0.0;
};

OracleSolution oracle_solve(const std::vector<double>& sigmas_desc,
                            const std::vector<double>& probs_desc,
                            const std::vector<double>& mags_desc,
                            const std::vector<double>& ch_probs_desc, int n, int offset,
                            double avg_power, bool anti_pairing = false) {
    const int j = static_cast<int>(sigmas_desc.size());
    const int kk = static_cast<int>(mags_desc.size());
    std::vector<double> var_asc(j), mag_asc(kk), chp_asc(kk);
    for (int m = 0; m < j; ++m) var_asc[m] = probs_desc[j - 1 - m];
    for (int k = 0; k < kk; ++k) {
        mag_asc[k] = mags_desc[kk - 1 - k];
        chp_asc[k] = ch_probs_desc[kk - 1 - k];
    }
    const int cbar = n + offset;
    std::vector<OracleCell> cells;
    for (int t = 1; t <= n; ++t) {
        std::vector<double> pm = enumerated_rank_pmf(var_asc, n, t);
        int ch_rank = anti_pairing ? (n - t + 1) + offset : t + offset;
        std::vector<double> cw = enumerated_rank_pmf(chp_asc, cbar, ch_rank);
        for (int m = 0; m < j; ++m)
            for (int k = 0; k < kk; ++k)
                if (pm[m] * cw[k] > 0.0)
                    cells.push_back({pm[m] * cw[k] / n, sigmas_desc[j - 1 - m], mag_asc[k]});
    }
    auto power_at = [&](double delta) {
        double acc = 0.0;
        for (const OracleCell& c : cells)
            acc += c.weight *
                   std::max(delta * c.sigma / c.magnitude - 1.0 / (c.magnitude * c.magnitude),
                            0.0);
        return acc;
    };
    double lo = 0.0, hi = 1.0;
    while (power_at(hi) < avg_power) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (power_at(mid) < avg_power ? lo : hi) = mid;
    }
    OracleSolution out;
    out.multiplier = 0.5 * (lo + hi);
    for (const OracleCell& c : cells) {
        double p = std::max(
            out.multiplier * c.sigma / c.magnitude - 1.0 / (c.magnitude * c.magnitude), 0.0);
        out.distortion +=
            c.weight * c.sigma * c.sigma / (c.magnitude * c.magnitude * p + 1.0);
    }
    return out;
}

} // namespace

TEST_CASE("single measurement with one discarded weak draw matches the enumeration oracle") {
    // one parameter, channel {2 w.p. 1/2, 1 w.p. 1/2}, keep the better of two
    // draws: max law {1: 1/4, 2: 3/4}; E[P] = 1 forces the multiplier
    OracleSolution oracle =
        oracle_solve({1.0}, {1.0}, {2.0, 1.0}, {0.5, 0.5}, 1, 1, 1.0);
    CHECK(oracle.multiplier == doctest::Approx(2.3).epsilon(1e-9));
    CHECK(oracle.distortion == doctest::Approx(0.625 / 2.3).epsilon(1e-9));

    ParallelProblem prob{CompositeSource({1.0}, {1.0}),
                         FadingChannel::discrete({{2.0, 0.5}, {1.0, 0.5}}), 1, 1, 1.0};
    DiagonalSolution sol = solve_parallel(prob);
    CHECK(sol.multiplier == doctest::Approx(oracle.multiplier).epsilon(1e-9));
    CHECK(sol.average_distortion == doctest::Approx(oracle.distortion).epsilon(1e-9));
    CHECK(sol.average_power == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("no pooling and no discard reduces to the strict single-shot rule") {
    CompositeSource src({10.0, 5.0, 1.0, 0.5}, {0.1, 0.3, 0.4, 0.2});
    FadingChannel ch = FadingChannel::discrete(
        {{std::sqrt(10.0), 0.1}, {std::sqrt(5.0), 0.3}, {1.0, 0.4}, {std::sqrt(0.5), 0.2}});
    AllocationTable strict = strict_delay_optimal(src, ch, 10.0);
    DiagonalSolution sol = solve_parallel({src, ch, 1, 0, 10.0});
    CHECK(sol.multiplier == doctest::Approx(strict.multiplier).epsilon(1e-9));
    CHECK(sol.average_distortion == doctest::Approx(strict.average_distortion).epsilon(1e-9));
}

TEST_CASE("pooling two exchangeable measurements changes nothing for one parameter") {
    CompositeSource src({1.0}, {1.0});
    FadingChannel ch = FadingChannel::discrete({{2.0, 0.5}, {1.0, 0.5}});
    DiagonalSolution sol = solve_parallel({src, ch, 2, 0, 1.0});
    CHECK(sol.multiplier == doctest::Approx(13.0 / 6.0).epsilon(1e-9));
    CHECK(sol.average_distortion == doctest::Approx(4.5 / 13.0).epsilon(1e-9));
    // rank averages reproduce the pooled totals
    CHECK(0.5 * (sol.rank_power[0] + sol.rank_power[1]) ==
          doctest::Approx(sol.average_power).epsilon(1e-9));
    CHECK(0.5 * (sol.rank_distortion[0] + sol.rank_distortion[1]) ==
          doctest::Approx(sol.average_distortion).epsilon(1e-9));
}

TEST_CASE("two-parameter pooled problem matches the enumeration oracle") {
    std::vector<double> sig = {2.0, 1.0};
    std::vector<double> probs = {0.4, 0.6};
    std::vector<double> mags = {2.0, 1.0};
    std::vector<double> chp = {0.3, 0.7};
    OracleSolution oracle = oracle_solve(sig, probs, mags, chp, 2, 1, 1.5);

    ParallelProblem prob{CompositeSource({4.0, 1.0}, {0.4, 0.6}),
                         FadingChannel::discrete({{2.0, 0.3}, {1.0, 0.7}}), 2, 1, 1.5};
    DiagonalSolution sol = solve_parallel(prob);
    CHECK(sol.multiplier == doctest::Approx(oracle.multiplier).epsilon(1e-9));
    CHECK(sol.average_distortion == doctest::Approx(oracle.distortion).epsilon(1e-9));
    CHECK(sol.average_power == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(0.5 * (sol.rank_power[0] + sol.rank_power[1]) ==
          doctest::Approx(sol.average_power).epsilon(1e-9));
    CHECK(0.5 * (sol.rank_distortion[0] + sol.rank_distortion[1]) ==
          doctest::Approx(sol.average_distortion).epsilon(1e-9));
}

TEST_CASE("a single channel state collapses every rank to the direct formula") {
    CompositeSource src({1.0}, {1.0});
    FadingChannel ch = FadingChannel::discrete({{2.0, 1.0}});
    for (auto [n, off] : {std::pair{1, 0}, std::pair{3, 2}, std::pair{5, 0}}) {
        DiagonalSolution sol = solve_parallel({src, ch, n, off, 1.5});
        CHECK(sol.average_power == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(sol.average_distortion == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
        for (int t = 0; t < n; ++t) {
            CHECK(sol.rank_power[t] == doctest::Approx(1.5).epsilon(1e-9));
            CHECK(sol.rank_distortion[t] == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("replaying the optimal gains through the fixed-mapping evaluator is consistent") {
    ParallelProblem prob{CompositeSource({4.0, 1.0}, {0.4, 0.6}),
                         FadingChannel::discrete({{2.0, 0.3}, {1.0, 0.7}}), 2, 1, 1.5};
    DiagonalSolution sol = solve_parallel(prob);
    std::vector<RankGain> gains(2, [&](double h, double s) {
        return strict_gain(sol.multiplier, h, s);
    });
    MappingResult mr = evaluate_fixed_mapping(prob, gains);
    CHECK(mr.average_power == doctest::Approx(sol.average_power).epsilon(1e-9));
    CHECK(mr.average_distortion == doctest::Approx(sol.average_distortion).epsilon(1e-9));
}

TEST_CASE("perturbing the optimal gains at the same budget strictly loses") {
    ParallelProblem prob{CompositeSource({4.0, 1.0}, {0.4, 0.6}),
                         FadingChannel::discrete({{2.0, 0.3}, {1.0, 0.7}}), 2, 1, 1.5};
    DiagonalSolution sol = solve_parallel(prob);

    std::vector<RankGain> bumped;
    for (int t = 0; t < 2; ++t) {
        double factor = t == 0 ? 1.15 : 1.0;
        bumped.push_back([&sol, factor](double h, double s) {
            return factor * strict_gain(sol.multiplier, h, s);
        });
    }
    MappingResult raw = evaluate_fixed_mapping(prob, bumped);
    double scale = std::sqrt(prob.avg_power / raw.average_power);
    std::vector<RankGain> scaled;
    for (int t = 0; t < 2; ++t) {
        double factor = (t == 0 ? 1.15 : 1.0) * scale;
        scaled.push_back([&sol, factor](double h, double s) {
            return factor * strict_gain(sol.multiplier, h, s);
        });
    }
    MappingResult mr = evaluate_fixed_mapping(prob, scaled);
    CHECK(mr.average_power == doctest::Approx(prob.avg_power).epsilon(1e-9));
    CHECK(mr.average_distortion > sol.average_distortion + 1e-9);
}

TEST_CASE("random budget-matched gain families never beat the pooled optimum") {
    ParallelProblem prob{CompositeSource({4.0, 1.0}, {0.4, 0.6}),
                         FadingChannel::discrete({{2.0, 0.3}, {1.0, 0.7}}), 2, 1, 1.5};
    DiagonalSolution sol = solve_parallel(prob);
    Rng rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        double a0 = 0.1 + 2.0 * draw_uniform(rng);
        double a1 = 0.1 + 2.0 * draw_uniform(rng);
        double b0 = draw_uniform(rng);
        double b1 = draw_uniform(rng);
        std::vector<RankGain> gains = {
            [a0, b0](double h, double s) { return a0 * s / (1.0 + b0 * h); },
            [a1, b1](double h, double s) { return a1 / (s + b1 * h); }};
        MappingResult raw = evaluate_fixed_mapping(prob, gains);
        double scale = std::sqrt(prob.avg_power / raw.average_power);
        std::vector<RankGain> scaled = {
            [a0, b0, scale](double h, double s) { return scale * a0 * s / (1.0 + b0 * h); },
            [a1, b1, scale](double h, double s) { return scale * a1 / (s + b1 * h); }};
        MappingResult mr = evaluate_fixed_mapping(prob, scaled);
        CHECK(mr.average_power == doctest::Approx(prob.avg_power).epsilon(1e-9));
        CHECK(mr.average_distortion >= sol.average_distortion - 1e-12);
    }
}

TEST_CASE("pairing strong channels with large variances beats the reversed pairing") {
    std::vector<double> sig = {2.0, 1.0};
    std::vector<double> probs = {0.4, 0.6};
    std::vector<double> mags = {2.0, 1.0};
    std::vector<double> chp = {0.3, 0.7};
    for (double p : {0.4, 1.5, 6.0}) {
        OracleSolution ordered = oracle_solve(sig, probs, mags, chp, 2, 1, p, false);
        OracleSolution anti = oracle_solve(sig, probs, mags, chp, 2, 1, p, true);
        CHECK(ordered.distortion <= anti.distortion + 1e-12);

        DiagonalSolution sol =
            solve_parallel({CompositeSource({4.0, 1.0}, {0.4, 0.6}),
                            FadingChannel::discrete({{2.0, 0.3}, {1.0, 0.7}}), 2, 1, p});
        CHECK(sol.average_distortion == doctest::Approx(ordered.distortion).epsilon(1e-9));
    }
}

TEST_CASE("continuous channels pool through the quadrature support") {
    CompositeSource src({4.0, 1.0}, {0.4, 0.6});
    FadingChannel ch = FadingChannel::rayleigh(3.0);
    DiagonalSolution sol = solve_parallel({src, ch, 2, 1, 2.0});
    CHECK(sol.average_power == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(sol.average_distortion > 0.0);
    CHECK(sol.average_distortion < 0.4 * 4.0 + 0.6 * 1.0);
    CHECK(0.5 * (sol.rank_power[0] + sol.rank_power[1]) ==
          doctest::Approx(sol.average_power).epsilon(1e-9));
}

TEST_CASE("malformed problems and negative gains are rejected") {
    CompositeSource src({1.0}, {1.0});
    FadingChannel ch = FadingChannel::discrete({{1.0, 1.0}});
    CHECK_THROWS_AS(solve_parallel({src, ch, 0, 0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_parallel({src, ch, 1, -1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_parallel({src, ch, 1, 0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(
        evaluate_fixed_mapping({src, ch, 2, 0, 1.0}, {[](double, double) { return 1.0; }}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        evaluate_fixed_mapping({src, ch, 1, 0, 1.0}, {[](double, double) { return -1.0; }}),
        std::invalid_argument);
}
