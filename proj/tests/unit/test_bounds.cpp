#include <cmath>
#include <vector>

#include <doctest.h>

#include "ltsim/bounds.hpp"
#include "ltsim/errors.hpp"
#include "ltsim/waterfill.hpp"

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

} // namespace

TEST_CASE("zero power gives the prior distortion and zero rate") {
    TlbResult idle = tlb(four_param_source(), matched_channel(), 0.0);
    CHECK(idle.bits_per_use == 0.0);
    CHECK(idle.distortion == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("the capacity route reproduces the matched closed form end to end") {
    CompositeSource src = four_param_source();
    FadingChannel ch = matched_channel();
    TlbResult bound = tlb(src, ch, 10.0);

    // oracle: water level P + E[1/h^2], then the two water-fills in sequence
    double inv_sq = 0.1 / 10.0 + 0.3 / 5.0 + 0.4 / 1.0 + 0.2 / 0.5;
    double alpha = 10.0 + inv_sq;
    double bits = 0.0;
    const double p[4] = {0.1, 0.3, 0.4, 0.2};
    const double g[4] = {10.0, 5.0, 1.0, 0.5};
    for (int k = 0; k < 4; ++k)
        bits += p[k] * 0.5 * std::log2(1.0 + g[k] * (alpha - 1.0 / g[k]));
    RateAllocation ra = reverse_waterfill(src, bits);

    CHECK(bound.alpha == doctest::Approx(alpha).epsilon(1e-7));
    CHECK(bound.bits_per_use == doctest::Approx(bits).epsilon(1e-8));
    CHECK(bound.beta == doctest::Approx(ra.beta).epsilon(1e-7));
    CHECK(bound.distortion == doctest::Approx(ra.average_distortion).epsilon(1e-7));

    // matched setup: the floor is the inverse water level
    CHECK(bound.beta == doctest::Approx(1.0 / alpha).epsilon(1e-6));
    CHECK(bound.distortion == doctest::Approx(0.09199632014725938).epsilon(1e-6));
}

TEST_CASE("rayleigh bounds decrease with power and match frozen references") {
    CompositeSource src = four_param_source();
    FadingChannel ch = FadingChannel::rayleigh(3.0);
    const double power[4] = {1.0, std::pow(10.0, 0.5), 10.0, std::pow(10.0, 1.5)};
    const double want[4] = {0.1404368683985477, 0.050636650996410355, 0.016948774548930564,
                            0.005482757637518003};
    double prev = 1e9;
    for (int i = 0; i < 4; ++i) {
        TlbResult r = tlb(src, ch, power[i]);
        CHECK(r.distortion == doctest::Approx(want[i]).epsilon(1e-7));
        CHECK(r.distortion < prev);
        prev = r.distortion;
    }
}

TEST_CASE("dropping encoder channel knowledge can only shrink the rate") {
    CompositeSource src = four_param_source();
    for (double power : {0.5, 2.0, 10.0}) {
        TlbResult with_csi = tlb(src, matched_channel(), power, true);
        TlbResult without = tlb(src, matched_channel(), power, false);
        CHECK(without.bits_per_use <= with_csi.bits_per_use + 1e-12);
        CHECK(without.distortion >= with_csi.distortion - 1e-12);
        CHECK(without.alpha == 0.0);
    }
}

TEST_CASE("unit delay pins the pool to one measurement and the strict rule") {
    CompositeSource src = four_param_source();
    FadingChannel ray = FadingChannel::rayleigh(3.0);
    LlbResult r = llb(src, ray, 1, 10.0, 8);
    CHECK(r.best_pool == 1);
    CHECK_FALSE(r.capped);
    CHECK(r.per_pool.size() == 8u);
    AllocationTable strict = strict_delay_optimal(src, ray, 10.0);
    CHECK(r.distortion == doctest::Approx(strict.average_distortion).epsilon(1e-9));
    CHECK(r.distortion == doctest::Approx(0.038330876999194526).epsilon(1e-7));
    CHECK(r.multiplier == doctest::Approx(strict.multiplier).epsilon(1e-9));

    LlbResult disc = llb(src, matched_channel(), 1, 10.0);
    AllocationTable strict_disc = strict_delay_optimal(src, matched_channel(), 10.0);
    CHECK(disc.distortion == doctest::Approx(strict_disc.average_distortion).epsilon(1e-9));
}

TEST_CASE("the lower bound never rises with delay") {
    CompositeSource src = four_param_source();
    FadingChannel ray = FadingChannel::rayleigh(3.0);
    double prev = 1e9;
    for (int d : {1, 3, 5, 9}) {
        LlbResult r = llb(src, ray, d, 10.0, 8);
        CHECK(r.distortion <= prev + 1e-12);
        prev = r.distortion;
    }
}

TEST_CASE("a single channel state flattens the pool curve") {
    CompositeSource src({1.0}, {1.0});
    FadingChannel one = FadingChannel::discrete({{2.0, 1.0}});
    LlbResult r = llb(src, one, 7, 1.5, 16);
    CHECK_FALSE(r.capped);
    for (double v : r.per_pool) CHECK(v == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("a rising pool curve at the cap is flagged") {
    CompositeSource src = four_param_source();
    FadingChannel ray = FadingChannel::rayleigh(3.0);
    LlbResult tight = llb(src, ray, 3, 10.0, 3);
    LlbResult wide = llb(src, ray, 3, 10.0, 24);
    CHECK(tight.capped);
    CHECK(tight.best_pool == 3);
    CHECK(wide.distortion >= tight.distortion - 1e-12);
    CHECK(wide.best_pool > tight.best_pool);
    // per_pool entries mirror the scan
    REQUIRE(tight.per_pool.size() == 3u);
    CHECK(tight.per_pool[2] == doctest::Approx(tight.distortion).epsilon(1e-12));
    CHECK(tight.per_pool[1] < tight.per_pool[2]);
}

TEST_CASE("bound arguments are validated") {
    CompositeSource src = four_param_source();
    FadingChannel ch = matched_channel();
    CHECK_THROWS_AS(tlb(src, ch, -1.0), ValidationError);
    CHECK_THROWS_AS(llb(src, ch, 0, 1.0), ValidationError);
    CHECK_THROWS_AS(llb(src, ch, 1, -1.0), ValidationError);
    CHECK_THROWS_AS(llb(src, ch, 1, 1.0, 0), ValidationError);
}
