#include "ltsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ltsim {

namespace {
constexpr double kProbTol = 1e-9;
constexpr double kMassEps = 1e-12; // residual mass treated as consumed
} // namespace

CompositeSource::CompositeSource(std::vector<double> variances,
                                 std::vector<double> request_probs)
    : variances_(std::move(variances)), probs_(std::move(request_probs)) {
    if (variances_.empty() || variances_.size() != probs_.size())
        throw std::invalid_argument("source: need equal, nonzero counts of variances and probabilities");
    for (std::size_t i = 0; i < variances_.size(); ++i) {
        if (!(variances_[i] > 0.0))
            throw std::invalid_argument("source: variances must be positive");
        if (i > 0 && !(variances_[i] < variances_[i - 1]))
            throw std::invalid_argument("source: variances must be strictly descending");
        if (!(probs_[i] > 0.0))
            throw std::invalid_argument("source: request probabilities must be positive");
    }
    const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument("source: request probabilities must sum to 1");
    sigmas_.resize(variances_.size());
    cum_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        probs_[i] /= total;
        sigmas_[i] = std::sqrt(variances_[i]);
        acc += probs_[i];
        cum_[i] = acc;
    }
    cum_.back() = 1.0;
}

double CompositeSource::mean_variance() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < variances_.size(); ++i)
        acc += probs_[i] * variances_[i];
    return acc;
}

int CompositeSource::sample_request(Rng& rng) const {
    const double u = draw_uniform(rng);
    for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        if (u <= cum_[i]) return static_cast<int>(i);
    return static_cast<int>(cum_.size()) - 1;
}

FadingChannel FadingChannel::discrete(std::vector<ChannelState> states) {
    if (states.empty())
        throw std::invalid_argument("channel: need at least one state");
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!(states[i].magnitude > 0.0))
            throw std::invalid_argument("channel: state magnitudes must be positive");
        if (i > 0 && !(states[i].magnitude < states[i - 1].magnitude))
            throw std::invalid_argument("channel: state magnitudes must be strictly descending");
        if (!(states[i].prob > 0.0))
            throw std::invalid_argument("channel: state probabilities must be positive");
        total += states[i].prob;
    }
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument("channel: state probabilities must sum to 1");
    FadingChannel ch;
    ch.discrete_ = true;
    ch.states_ = std::move(states);
    for (auto& s : ch.states_) s.prob /= total;
    ch.cum_ascending_.resize(ch.states_.size());
    double acc = 0.0;
    const std::size_t n = ch.states_.size();
    for (std::size_t i = 0; i < n; ++i) {
        acc += ch.states_[n - 1 - i].prob; // ascending magnitude = reverse storage order
        ch.cum_ascending_[i] = acc;
    }
    ch.cum_ascending_.back() = 1.0;
    return ch;
}

FadingChannel FadingChannel::rayleigh(double scale) {
    if (!(scale > 0.0))
        throw std::invalid_argument("channel: rayleigh scale must be positive");
    FadingChannel ch;
    ch.discrete_ = false;
    ch.scale_ = scale;
    return ch;
}

const std::vector<ChannelState>& FadingChannel::states() const {
    if (!discrete_)
        throw std::logic_error("channel: states() requires the discrete variant");
    return states_;
}

double FadingChannel::scale() const {
    if (discrete_)
        throw std::logic_error("channel: scale() requires the rayleigh variant");
    return scale_;
}

double FadingChannel::cdf(double x) const {
    if (!discrete_) {
        if (x <= 0.0) return 0.0;
        return -std::expm1(-x * x / (2.0 * scale_ * scale_));
    }
    double acc = 0.0;
    for (auto it = states_.rbegin(); it != states_.rend(); ++it) {
        if (it->magnitude <= x) acc += it->prob;
        else break;
    }
    return acc;
}

double FadingChannel::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) {
        if (u == 0.0) return 0.0;
        if (u == 1.0 && discrete_) return states_.front().magnitude;
        throw std::invalid_argument("channel: quantile argument must lie in (0,1)");
    }
    if (!discrete_)
        return scale_ * std::sqrt(-2.0 * std::log1p(-u));
    const std::size_t n = states_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (u <= cum_ascending_[i]) return states_[n - 1 - i].magnitude;
    return states_.front().magnitude;
}

double FadingChannel::sample(Rng& rng) const {
    return quantile(draw_uniform(rng));
}

double FadingChannel::mean_square() const {
    if (!discrete_) return 2.0 * scale_ * scale_;
    double acc = 0.0;
    for (const auto& s : states_) acc += s.prob * s.magnitude * s.magnitude;
    return acc;
}

int FadingChannel::state_index(double magnitude) const {
    if (!discrete_)
        throw std::logic_error("channel: state_index() requires the discrete variant");
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const double m = states_[i].magnitude;
        if (std::abs(magnitude - m) <= 1e-12 * std::max(1.0, m))
            return static_cast<int>(i);
    }
    throw std::invalid_argument("channel: magnitude does not match any state");
}

double ChannelPartition::boundary(int i) const {
    if (boundaries_.empty())
        throw std::logic_error("partition: boundaries exist only for continuous laws");
    return boundaries_[static_cast<std::size_t>(i)];
}

ChannelPartition build_partition(const CompositeSource& source, const FadingChannel& channel) {
    const int j = source.size();
    ChannelPartition part;
    part.set_probs_ = source.request_probs();
    part.midpoints_.resize(j);

    if (!channel.is_discrete()) {
        part.boundaries_.resize(j + 1);
        part.boundaries_[0] = std::numeric_limits<double>::infinity();
        part.boundaries_[j] = 0.0;
        double upper_mass = 1.0; // F at the set's upper boundary
        for (int m = 0; m < j; ++m) {
            const double lower_mass = upper_mass - source.request_prob(m);
            if (m + 1 < j)
                part.boundaries_[m + 1] = channel.quantile(std::max(lower_mass, 0.0));
            part.midpoints_[m] = channel.quantile(0.5 * (upper_mass + std::max(lower_mass, 0.0)));
            upper_mass = lower_mass;
        }
        return part;
    }

    // Greedy descending scan: each set takes mass from the strongest states not
    // yet fully assigned, splitting a state across sets when needed.
    const auto& states = channel.states();
    part.state_shares_.resize(states.size());
    std::vector<std::vector<int>> members(j);
    std::size_t k = 0;
    double remaining = states[0].prob;
    for (int m = 0; m < j; ++m) {
        double need = source.request_prob(m);
        while (need > kMassEps) {
            if (k >= states.size()) {
                // Probability rounding can leave the last sliver unassigned.
                if (need <= 1e-9) break;
                throw std::logic_error("partition: ran out of channel mass");
            }
            const double take = std::min(remaining, need);
            if (take > kMassEps) {
                part.state_shares_[k].push_back({m, take / states[k].prob});
                members[m].push_back(static_cast<int>(k));
            }
            need -= take;
            remaining -= take;
            if (remaining <= kMassEps) {
                ++k;
                if (k < states.size()) remaining = states[k].prob;
            }
        }
    }
    for (auto& shares : part.state_shares_) {
        if (shares.size() > 1) part.has_split_ = true;
        double tot = 0.0;
        for (const auto& s : shares) tot += s.conditional_prob;
        for (auto& s : shares) s.conditional_prob /= tot;
    }
    for (int m = 0; m < j; ++m) {
        if (members[m].empty())
            throw std::logic_error("partition: set received no channel states");
        double acc = 0.0;
        for (int idx : members[m]) acc += states[static_cast<std::size_t>(idx)].magnitude;
        part.midpoints_[m] = acc / static_cast<double>(members[m].size());
    }
    return part;
}

int classify(const ChannelPartition& partition, const FadingChannel& channel,
             double magnitude, Rng& rng) {
    if (partition.continuous()) {
        const int j = partition.sets();
        for (int m = 0; m < j - 1; ++m)
            if (magnitude >= partition.boundary(m + 1)) return m;
        return j - 1;
    }
    const auto& shares = partition.state_shares()[
        static_cast<std::size_t>(channel.state_index(magnitude))];
    if (shares.size() == 1) return shares[0].set;
    const double u = draw_uniform(rng);
    double acc = 0.0;
    for (const auto& s : shares) {
        acc += s.conditional_prob;
        if (u <= acc) return s.set;
    }
    return shares.back().set;
}

StepSample sample_step(const CompositeSource& source, const FadingChannel& channel, Rng& rng) {
    StepSample out;
    out.param = source.sample_request(rng);
    out.value = source.sigma(out.param) * draw_normal(rng);
    out.magnitude = channel.sample(rng);
    return out;
}

} // namespace ltsim
