#pragma once

#include <functional>
#include <vector>

#include "ltsim/model.hpp"

namespace ltsim {

// One bisected Lagrange multiplier together with the constraint value it
// achieves. `achieved` is reported so callers can verify the constraint was
// met instead of trusting the solve.
struct Multiplier {
    double value = 0.0;
    double achieved = 0.0;
    double target = 0.0;
    int iterations = 0;
};

// Solve fn(x) = target on [0, inf) by geometric bracket growth followed by
// bisection (relative tolerance 1e-9 on the bracket, at most 200 iterations).
// `solve_increasing` requires fn nondecreasing with fn(0) <= target;
// `solve_decreasing` requires fn nonincreasing with fn(x) -> below target.
// Throws NumericalError when no bracket is found.
Multiplier solve_increasing(const std::function<double(double)>& fn, double target);
Multiplier solve_decreasing(const std::function<double(double)>& fn, double target);

// Linear MMSE decoder gain for encoder gain f over magnitude h:
// g = h f var / (h^2 f^2 var + 1).
double mmse_gain(double encoder_gain, double magnitude, double variance);

// Single-slot water-filling family, multiplier lambda:
//   encoder gain  f(h,m) = sqrt([lambda/(h sigma) - 1/(h^2 sigma^2)]^+)
//   slot power    P(h,m) = (sigma/h) [lambda - 1/(h sigma)]^+
//   distortion    D(h,m) = (sigma/h) min(1/lambda, h sigma)
double strict_gain(double lambda, double magnitude, double sigma);
double strict_power(double lambda, double magnitude, double sigma);
double strict_distortion(double lambda, double magnitude, double sigma);

// Matching-strategy power rule and the resulting conditional distortion.
// Identical to strict_power when mu = lambda: [mu sigma/h - 1/h^2]^+.
double lthm_power_rule(double mu, double magnitude, double sigma);
double conditional_distortion(double variance, double magnitude, double power);

struct AllocationEntry {
    double magnitude = 0.0;
    int param = 0;
    double weight = 0.0; // joint probability of this (state, parameter) cell
    double power = 0.0;
    double distortion = 0.0;
    double encoder_gain = 0.0;
};

// Solved per-slot allocation. Discrete channels enumerate every
// (state, parameter) cell; continuous channels leave `entries` empty and are
// described by the multiplier alone. `param_gain`/`param_power` are filled
// only by encoders that cannot see the channel (one entry per parameter).
struct AllocationTable {
    double multiplier = 0.0;
    double average_power = 0.0;
    double average_distortion = 0.0;
    std::vector<AllocationEntry> entries;
    std::vector<double> param_gain;
    std::vector<double> param_power;
};

// Optimal one-measurement-per-slot transmission with full channel knowledge
// at the encoder: water-filling over the independent (parameter, magnitude)
// pairs, multiplier chosen so average power meets `avg_power`.
AllocationTable strict_delay_optimal(const CompositeSource& source,
                                     const FadingChannel& channel, double avg_power);

struct CapacityResult {
    double alpha = 0.0;        // water level; power per slot is [alpha - 1/h^2]^+
    double bits_per_use = 0.0; // E[ (1/2) log2(1 + h^2 P(h)) ]
};

// Ergodic capacity with transmitter channel knowledge (temporal water-filling).
CapacityResult ergodic_capacity(const FadingChannel& channel, double avg_power);

// Ergodic capacity with constant transmit power (no transmitter knowledge).
double constant_power_capacity(const FadingChannel& channel, double avg_power);

struct RateAllocation {
    double beta = 0.0; // reverse water level: distortion floor
    double average_distortion = 0.0;
    std::vector<double> rates;       // per parameter, bits
    std::vector<double> distortions; // per parameter: min(beta, variance)
};

// Distortion-minimizing rate split of `avg_rate_bits` across the source
// parameters: R(m) = (1/2)[log2(variance/beta)]^+, E[R] = avg_rate_bits.
RateAllocation reverse_waterfill(const CompositeSource& source, double avg_rate_bits);

} // namespace ltsim
