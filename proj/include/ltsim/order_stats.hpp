#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ltsim/model.hpp"

namespace ltsim {

// Rank t (1 = minimum) among sample_size i.i.d. draws.
struct OrderStatistic {
    int sample_size = 1;
    int rank = 1;
};

double log_binomial(int n, int k);

// pmf of the rank-t draw for a discrete base law. The input pmf must be
// ordered ascending in the underlying value; the result uses the same order.
// P(X_(t) = m) = sum_{b>=t} C(n,b) [F(m)^b (1-F(m))^(n-b) - F(m-1)^b (1-F(m-1))^(n-b)]
std::vector<double> discrete_order_pmf(std::span<const double> pmf_ascending,
                                       OrderStatistic os);

// Density of the rank-t magnitude of a continuous channel law:
// t * C(n,t) * p(h) * F(h)^(t-1) * (1-F(h))^(n-t)
double continuous_order_density(const FadingChannel& channel, OrderStatistic os, double h);

// Finite representation of a rank law for expectation sums: points ascending,
// positive weights summing to 1. Continuous laws are transformed to the unit
// interval (u = F(h)) where the rank density is the Beta(t, n-t+1) polynomial
// and evaluated on the fixed Gauss-Legendre grid; discrete laws enumerate
// their states.
struct WeightedSupport {
    std::vector<double> points;
    std::vector<double> weights;
};

WeightedSupport rank_support(const FadingChannel& channel, OrderStatistic os);

// All ranks of one sample size share their support points, so building a
// contiguous rank range together evaluates the quantile grid once.
// weights[i] equals rank_support(channel, {sample_size, rank_lo + i}).weights.
struct RankFamily {
    std::vector<double> points;
    std::vector<std::vector<double>> weights;
};

RankFamily rank_support_family(const FadingChannel& channel, int sample_size, int rank_lo,
                               int rank_hi);

double rank_expectation(const FadingChannel& channel, OrderStatistic os,
                        const std::function<double(double)>& f);

} // namespace ltsim
