#include <cmath>
#include <vector>

#include <doctest.h>

#include "ltsim/errors.hpp"
#include "ltsim/no_csi.hpp"

using namespace ltsim;

namespace {

CompositeSource four_param_source() {
    return CompositeSource({10.0, 5.0, 1.0, 0.5}, {0.1, 0.3, 0.4, 0.2});
}

FadingChannel matched_channel() {
    return FadingChannel::discrete({{std::sqrt(10.0), 0.1},
                                    {std::sqrt(5.0), 0.3},
                                    {1.0, 0.4},
                                    {std::sqrt(0.5), 0.2}});
}

double psi_discrete(const FadingChannel& ch, double p) {
    double acc = 0.0;
    for (const auto& s : ch.states()) {
        double g = s.magnitude * s.magnitude;
        acc += s.prob * g / ((g * p + 1.0) * (g * p + 1.0));
    }
    return acc;
}

// oracle: enumerate the two requests and the two channel draws outcome by
// outcome; a dead draw carries no signal, repeated sends combine their SNRs
struct PairDistortions {
    double diagonal = 0.0;
    double repeated = 0.0;
};

PairDistortions enumerate_schemes(double p1, double v, double h1, double p11, double p12,
                                  double p21) {
    const double p2 = 1.0 - p1;
    const double ch_state[2] = {h1 * h1, 0.0};
    const double ch_prob[2] = {p1, p2};
    PairDistortions out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            double w = ch_prob[a] * ch_prob[b];
            double ga = ch_state[a], gb = ch_state[b];
            // requests (1,1): each copy of parameter 1 rides its own draw
            double d11 = v / (ga * p11 / 2.0 + 1.0) + v / (gb * p11 / 2.0 + 1.0);
            out.diagonal += w * p1 * p1 * d11 / 2.0;
            out.repeated += w * p1 * p1 * d11 / 2.0;
            // requests (1,2) and (2,1): the zero-variance parameter is free
            double diag_12 = v / (ga * p12 + 1.0);
            double diag_21 = v / (gb * p21 + 1.0);
            out.diagonal += w * p1 * p2 * (diag_12 + diag_21) / 2.0;
            double rep_12 = v / (ga * p12 / 2.0 + gb * p12 / 2.0 + 1.0);
            double rep_21 = v / (ga * p21 / 2.0 + gb * p21 / 2.0 + 1.0);
            out.repeated += w * p1 * p2 * (rep_12 + rep_21) / 2.0;
        }
    }
    return out;
}

} // namespace

TEST_CASE("psi starts at the mean square gain and decreases strictly") {
    PsiCurve psi(matched_channel());
    CHECK(psi.value(0.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(psi.value(1.0) == doctest::Approx(psi_discrete(matched_channel(), 1.0))
                                .epsilon(1e-12));
    CHECK(psi.value(1.0) == doctest::Approx(0.19437557392102847).epsilon(1e-12));
    double prev = psi.value(0.0);
    for (double p : {0.05, 0.3, 1.0, 4.0, 20.0}) {
        double cur = psi.value(p);
        CHECK(cur < prev);
        prev = cur;
    }

    PsiCurve ray(FadingChannel::rayleigh(3.0));
    // quadrature trims a little tail mass off the exact 18
    CHECK(ray.value(0.0) == doctest::Approx(18.0).epsilon(1e-3));
}

TEST_CASE("psi inverse is a right inverse on the curve's range") {
    PsiCurve psi(matched_channel());
    for (double p : {0.0, 0.1, 1.0, 10.0}) {
        double back = psi.inverse(psi.value(p));
        CHECK(back == doctest::Approx(p).epsilon(1e-9));
    }
    // arguments at or above psi(0) clamp to zero power
    CHECK(psi.inverse(5.0) == 0.0);
    CHECK_THROWS_AS(psi.inverse(0.0), NumericalError);
    CHECK_THROWS_AS(psi.inverse(-1.0), NumericalError);
}

TEST_CASE("a single live state forces all power onto the lone parameter") {
    CompositeSource src({1.0}, {1.0});
    FadingChannel ch = FadingChannel::discrete({{1.0, 1.0}});
    AllocationTable table = no_csi_strict(src, ch, 1.0);
    CHECK(table.param_power[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(table.average_power == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(table.average_distortion == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("blind power allocation matches an independent double bisection") {
    CompositeSource src = four_param_source();
    FadingChannel ch = matched_channel();

    // oracle: psi and its inverse by hand, then bisect the multiplier
    auto psi_inv = [&](double y) {
        if (y >= psi_discrete(ch, 0.0)) return 0.0;
        double lo = 0.0, hi = 1.0;
        while (psi_discrete(ch, hi) > y) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (psi_discrete(ch, mid) > y ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto avg_power = [&](double lambda) {
        double acc = 0.0;
        for (int m = 0; m < src.size(); ++m)
            acc += src.request_prob(m) * psi_inv(lambda / src.variance(m));
        return acc;
    };
    double lo = 1e-9, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (avg_power(mid) > 1.0 ? lo : hi) = mid;
    }
    double lambda_oracle = 0.5 * (lo + hi);
    double d_oracle = 0.0;
    for (int m = 0; m < src.size(); ++m) {
        double pm = psi_inv(lambda_oracle / src.variance(m));
        for (const auto& s : ch.states())
            d_oracle += src.request_prob(m) * s.prob * src.variance(m) /
                        (s.magnitude * s.magnitude * pm + 1.0);
    }

    AllocationTable table = no_csi_strict(src, ch, 1.0);
    CHECK(table.multiplier == doctest::Approx(lambda_oracle).epsilon(1e-6));
    CHECK(table.average_power == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(table.average_distortion == doctest::Approx(d_oracle).epsilon(1e-7));
    CHECK(table.multiplier == doctest::Approx(0.5005806255531208).epsilon(1e-6));
    CHECK(table.average_distortion == doctest::Approx(0.9452212239901067).epsilon(1e-6));
}

TEST_CASE("a tight budget clips the weak parameters entirely") {
    CompositeSource src = four_param_source();
    FadingChannel ch = matched_channel();
    // below E[P] ~ 0.0082 the water level prices out everything but the
    // largest variance, so the whole budget rides on parameter 0
    AllocationTable table = no_csi_strict(src, ch, 0.005);
    CHECK(table.param_power[0] == doctest::Approx(0.05).epsilon(1e-6));
    for (int m = 1; m < 4; ++m) CHECK(table.param_power[m] == 0.0);
    CHECK(table.average_power == doctest::Approx(0.005).epsilon(1e-7));

    AllocationTable idle = no_csi_strict(src, ch, 0.0);
    CHECK(idle.average_power == 0.0);
    CHECK(idle.average_distortion == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(idle.multiplier == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("hiding the channel from the encoder never helps") {
    CompositeSource src = four_param_source();
    for (double p : {0.1, 1.0, 10.0, 100.0}) {
        AllocationTable blind = no_csi_strict(src, matched_channel(), p);
        AllocationTable seeing = strict_delay_optimal(src, matched_channel(), p);
        CHECK(blind.average_distortion >= seeing.average_distortion - 1e-12);

        FadingChannel ray = FadingChannel::rayleigh(3.0);
        AllocationTable blind_r = no_csi_strict(src, ray, p);
        AllocationTable seeing_r = strict_delay_optimal(src, ray, p);
        CHECK(blind_r.average_distortion >= seeing_r.average_distortion - 1e-12);
    }
}

TEST_CASE("the two-scheme evaluator equals the outcome enumeration everywhere tried") {
    CounterexampleSpec spec;
    CounterexampleResult got = counterexample(spec);
    PairDistortions want = enumerate_schemes(0.5, 1.0, 1.0, 8.0 / 3.0, 8.0 / 3.0, 8.0 / 3.0);
    CHECK(got.diagonal == doctest::Approx(want.diagonal).epsilon(1e-12));
    CHECK(got.non_diagonal == doctest::Approx(want.repeated).epsilon(1e-12));
    CHECK(got.diagonal == doctest::Approx(26.0 / 77.0).epsilon(1e-12));
    CHECK(got.non_diagonal == doctest::Approx(24.0 / 77.0).epsilon(1e-12));
    CHECK(got.non_diagonal < got.diagonal);

    // asymmetric feasible splits at other shapes
    for (double p1 : {0.3, 0.5, 0.7}) {
        double p2 = 1.0 - p1;
        for (double p12 : {0.5, 2.0}) {
            for (double p21 : {0.25, 1.5}) {
                double budget = 1.0;
                double p11 = (2.0 * budget - (p12 + p21) * p1 * p2) / (p1 * p1);
                if (p11 < 0.0) continue;
                CounterexampleSpec s;
                s.p1 = p1;
                s.sigma1_sq = 1.7;
                s.h1 = 1.3;
                s.power = budget;
                s.p11 = p11;
                s.p12 = p12;
                s.p21 = p21;
                CounterexampleResult r = counterexample(s);
                PairDistortions e = enumerate_schemes(p1, 1.7, 1.3, p11, p12, p21);
                CHECK(r.diagonal == doctest::Approx(e.diagonal).epsilon(1e-12));
                CHECK(r.non_diagonal == doctest::Approx(e.repeated).epsilon(1e-12));
                CHECK(r.non_diagonal < r.diagonal);
            }
        }
    }
}

TEST_CASE("repetition ties the diagonal scheme exactly when mixed pairs get no power") {
    CounterexampleSpec spec;
    spec.p12 = 0.0;
    spec.p21 = 0.0;
    spec.p11 = 8.0;
    CounterexampleResult r = counterexample(spec);
    CHECK(r.diagonal == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.non_diagonal == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.diagonal == r.non_diagonal);
}

TEST_CASE("with no power at all both schemes keep the prior") {
    CounterexampleSpec spec;
    spec.power = 0.0;
    spec.p11 = 0.0;
    spec.p12 = 0.0;
    spec.p21 = 0.0;
    CounterexampleResult r = counterexample(spec);
    CHECK(r.diagonal == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.non_diagonal == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("repetition wins strictly across the whole feasible split grid") {
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            double p12 = 0.2 + (3.8 - 0.2) * i / 19.0;
            double p21 = 0.2 + (3.8 - 0.2) * j / 19.0;
            double p11 = 8.0 - p12 - p21;
            REQUIRE(p11 >= 0.0);
            CounterexampleSpec spec;
            spec.p11 = p11;
            spec.p12 = p12;
            spec.p21 = p21;
            CounterexampleResult r = counterexample(spec);
            CHECK(r.non_diagonal < r.diagonal - 1e-9);
        }
    }
}

TEST_CASE("counterexample specs are validated") {
    CounterexampleSpec bad;
    bad.p11 = 1.0; // breaks the budget identity
    CHECK_THROWS_AS(counterexample(bad), ValidationError);
    CounterexampleSpec neg;
    neg.p12 = -1.0;
    CHECK_THROWS_AS(counterexample(neg), ValidationError);
    CounterexampleSpec p_out;
    p_out.p1 = 1.0;
    CHECK_THROWS_AS(counterexample(p_out), ValidationError);
    CounterexampleSpec v_out;
    v_out.sigma1_sq = 0.0;
    CHECK_THROWS_AS(counterexample(v_out), ValidationError);
    CounterexampleSpec h_out;
    h_out.h1 = -1.0;
    CHECK_THROWS_AS(counterexample(h_out), ValidationError);
}

TEST_CASE("the blind upper bound is the constant-power capacity route") {
    CompositeSource src = four_param_source();
    FadingChannel ch = matched_channel();
    TlbResult a = tlb_no_csi(src, ch, 3.0);
    TlbResult b = tlb(src, ch, 3.0, false);
    CHECK(a.bits_per_use == b.bits_per_use);
    CHECK(a.distortion == b.distortion);
    CHECK(a.alpha == 0.0);

    CompositeSource one({1.0}, {1.0});
    FadingChannel unit = FadingChannel::discrete({{1.0, 1.0}});
    TlbResult c = tlb_no_csi(one, unit, 3.0);
    CHECK(c.bits_per_use == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.distortion == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(tlb_no_csi(src, ch, 0.0).distortion == doctest::Approx(3.0).epsilon(1e-9));
}
