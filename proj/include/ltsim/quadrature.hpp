#pragma once

#include <functional>
#include <vector>

namespace ltsim {

// Composite Gauss-Legendre rule on [0,1]: 256 panels, 8 points each.
// Weights sum to 1; smooth integrands resolve to roughly 1e-8, which is the
// budget all continuous-channel expectations in this project are sized for.
struct UnitQuadrature {
    std::vector<double> nodes;   // ascending in (0,1)
    std::vector<double> weights; // positive, sum to 1

    static const UnitQuadrature& instance();
};

double integrate_unit(const std::function<double(double)>& f);

} // namespace ltsim
