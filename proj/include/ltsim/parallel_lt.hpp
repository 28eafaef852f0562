#pragma once

#include <functional>
#include <vector>

#include "ltsim/model.hpp"

namespace ltsim {

// One-shot transmission of n measurements over n + rank_offset channel uses
// with everything known in advance: measurements and channels are sorted and
// matched diagonally (rank t measurement on rank t + rank_offset channel,
// ranks ascending), discarding the rank_offset weakest channels.
struct ParallelProblem {
    CompositeSource source;
    FadingChannel channel;
    int n = 1;
    int rank_offset = 0;
    double avg_power = 0.0; // per measurement
};

struct DiagonalSolution {
    double multiplier = 0.0;
    double average_power = 0.0;
    double average_distortion = 0.0;
    std::vector<double> rank_power;      // per measurement rank, ascending variance
    std::vector<double> rank_distortion;
};

// Water-filling across all (rank, parameter, magnitude) cells with a single
// multiplier tied to the average power constraint.
DiagonalSolution solve_parallel(const ParallelProblem& problem);

// Average power/distortion of explicitly supplied per-rank encoder gains
// f_t(h, sigma), evaluated under the same diagonal rank coupling.
using RankGain = std::function<double(double magnitude, double sigma)>;

struct MappingResult {
    double average_power = 0.0;
    double average_distortion = 0.0;
};

MappingResult evaluate_fixed_mapping(const ParallelProblem& problem,
                                     const std::vector<RankGain>& gains);

} // namespace ltsim
