#include "ltsim/order_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "ltsim/quadrature.hpp"

namespace ltsim {

namespace {

void check_rank(OrderStatistic os) {
    if (os.sample_size < 1 || os.rank < 1 || os.rank > os.sample_size)
        throw std::invalid_argument("order stats: need 1 <= rank <= sample_size");
}

// C(n,b) F^b (1-F)^(n-b), stable for large n via logs; exact at F in {0,1}.
double binom_term(int n, int b, double f) {
    if (f <= 0.0) return b == 0 ? 1.0 : 0.0;
    if (f >= 1.0) return b == n ? 1.0 : 0.0;
    return std::exp(log_binomial(n, b) + b * std::log(f) + (n - b) * std::log1p(-f));
}

} // namespace

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<double> discrete_order_pmf(std::span<const double> pmf_ascending,
                                       OrderStatistic os) {
    check_rank(os);
    if (pmf_ascending.empty())
        throw std::invalid_argument("order stats: empty base pmf");
    const int n = os.sample_size;
    const int t = os.rank;
    std::vector<double> out(pmf_ascending.size(), 0.0);
    double f_prev = 0.0; // F(m-1), with F(-1) = 0
    double cum = 0.0;
    for (std::size_t m = 0; m < pmf_ascending.size(); ++m) {
        cum += pmf_ascending[m];
        const double f = (m + 1 == pmf_ascending.size()) ? 1.0 : cum;
        double acc = 0.0;
        for (int b = t; b <= n; ++b)
            acc += binom_term(n, b, f) - binom_term(n, b, f_prev);
        out[m] = std::max(acc, 0.0);
        f_prev = f;
    }
    return out;
}

double continuous_order_density(const FadingChannel& channel, OrderStatistic os, double h) {
    check_rank(os);
    if (channel.is_discrete())
        throw std::invalid_argument("order stats: density requires a continuous law");
    if (h <= 0.0) return 0.0;
    const double s = channel.scale();
    const double density = (h / (s * s)) * std::exp(-h * h / (2.0 * s * s));
    const double f = channel.cdf(h);
    const int n = os.sample_size;
    const int t = os.rank;
    double w = t * std::exp(log_binomial(n, t));
    if (t > 1) w *= std::pow(f, t - 1);
    if (n > t) w *= std::pow(1.0 - f, n - t);
    return w * density;
}

WeightedSupport rank_support(const FadingChannel& channel, OrderStatistic os) {
    check_rank(os);
    WeightedSupport out;
    const int n = os.sample_size;
    const int t = os.rank;
    if (channel.is_discrete()) {
        const auto& states = channel.states();
        std::vector<double> base(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            base[i] = states[states.size() - 1 - i].prob; // ascending magnitude
        std::vector<double> pmf = discrete_order_pmf(base, os);
        out.points.resize(states.size());
        out.weights = std::move(pmf);
        for (std::size_t i = 0; i < states.size(); ++i)
            out.points[i] = states[states.size() - 1 - i].magnitude;
        return out;
    }
    const UnitQuadrature& q = UnitQuadrature::instance();
    out.points.resize(q.nodes.size());
    out.weights.resize(q.nodes.size());
    const double logc = std::log(static_cast<double>(t)) + log_binomial(n, t);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double u = q.nodes[i];
        out.points[i] = channel.quantile(u);
        double lw = logc;
        if (t > 1) lw += (t - 1) * std::log(u);
        if (n > t) lw += (n - t) * std::log1p(-u);
        out.weights[i] = q.weights[i] * std::exp(lw);
    }
    return out;
}

RankFamily rank_support_family(const FadingChannel& channel, int sample_size, int rank_lo,
                               int rank_hi) {
    check_rank({sample_size, rank_lo});
    check_rank({sample_size, rank_hi});
    if (rank_hi < rank_lo)
        throw std::invalid_argument("order stats: rank range must be non-empty");
    RankFamily out;
    if (channel.is_discrete()) {
        for (int t = rank_lo; t <= rank_hi; ++t) {
            WeightedSupport s = rank_support(channel, {sample_size, t});
            if (out.points.empty()) out.points = std::move(s.points);
            out.weights.push_back(std::move(s.weights));
        }
        return out;
    }
    const UnitQuadrature& q = UnitQuadrature::instance();
    const int n = sample_size;
    out.points.resize(q.nodes.size());
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        out.points[i] = channel.quantile(q.nodes[i]);
    for (int t = rank_lo; t <= rank_hi; ++t) {
        std::vector<double> w(q.nodes.size());
        const double logc = std::log(static_cast<double>(t)) + log_binomial(n, t);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const double u = q.nodes[i];
            double lw = logc;
            if (t > 1) lw += (t - 1) * std::log(u);
            if (n > t) lw += (n - t) * std::log1p(-u);
            w[i] = q.weights[i] * std::exp(lw);
        }
        out.weights.push_back(std::move(w));
    }
    return out;
}

double rank_expectation(const FadingChannel& channel, OrderStatistic os,
                        const std::function<double(double)>& f) {
    const WeightedSupport s = rank_support(channel, os);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.points.size(); ++i)
        acc += s.weights[i] * f(s.points[i]);
    return acc;
}

} // namespace ltsim
