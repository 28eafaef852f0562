#include "ltsim/quadrature.hpp"

namespace ltsim {
namespace {

constexpr int kPanels = 256;

// 8-point Gauss-Legendre abscissae/weights on [-1,1], positive half.
constexpr double kAbscissa[4] = {
    0.18343464249564980494,
    0.52553240991632898582,
    0.79666647741362673959,
    0.96028985649753623168,
};
constexpr double kWeight[4] = {
    0.36268378337836198297,
    0.31370664587788728734,
    0.22238103445337447054,
    0.10122853629037625915,
};

UnitQuadrature build() {
    UnitQuadrature q;
    q.nodes.reserve(kPanels * 8);
    q.weights.reserve(kPanels * 8);
    const double width = 1.0 / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double mid = (p + 0.5) * width;
        for (int j = 3; j >= 0; --j) {
            q.nodes.push_back(mid - 0.5 * width * kAbscissa[j]);
            q.weights.push_back(0.5 * width * kWeight[j]);
        }
        for (int j = 0; j < 4; ++j) {
            q.nodes.push_back(mid + 0.5 * width * kAbscissa[j]);
            q.weights.push_back(0.5 * width * kWeight[j]);
        }
    }
    return q;
}

} // namespace

const UnitQuadrature& UnitQuadrature::instance() {
    static const UnitQuadrature q = build();
    return q;
}

double integrate_unit(const std::function<double(double)>& f) {
    const UnitQuadrature& q = UnitQuadrature::instance();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        acc += q.weights[i] * f(q.nodes[i]);
    return acc;
}

} // namespace ltsim
