#pragma once

#include <utility>

#include "ltsim/bounds.hpp"
#include "ltsim/model.hpp"
#include "ltsim/waterfill.hpp"

namespace ltsim {

// Expected marginal MSE reduction of power spent blindly over the channel
// law: psi(P) = E[ |h|^2 / (|h|^2 P + 1)^2 ]. Strictly decreasing from
// psi(0) = E[|h|^2] toward 0, which makes it invertible on (0, E[|h|^2]].
class PsiCurve {
public:
    explicit PsiCurve(const FadingChannel& channel);

    double value(double power) const;
    // Smallest power p with value(p) = y; arguments at or above value(0)
    // return 0 (the clipped branch of the allocation rule).
    double inverse(double y) const;

private:
    std::vector<double> points_;  // channel support
    std::vector<double> weights_; // matching probabilities
};

// Optimal single-slot transmission when only the decoder sees the channel:
// the encoder gain depends on the parameter alone, P(m) = [psi^-1(lambda /
// sigma_m^2)]^+ with lambda tied to the average power. Fills the
// per-parameter gain/power columns of the allocation table; entries stay
// empty (power cannot depend on the realized channel).
AllocationTable no_csi_strict(const CompositeSource& source, const FadingChannel& channel,
                              double avg_power);

// Two measurements of a two-parameter source (sigma2 = 0) over two i.i.d.
// channel draws from {h1 with prob p1, 0 with prob 1-p1}. Power is spent
// per request pair: p11 on the (1,1) pair (split equally), p12 / p21 on the
// mixed pairs. The degenerate second parameter and zero channel state live
// only inside this evaluator.
struct CounterexampleSpec {
    double p1 = 0.5;
    double sigma1_sq = 1.0;
    double h1 = 1.0;
    double power = 1.0;
    double p11 = 8.0 / 3.0;
    double p12 = 8.0 / 3.0;
    double p21 = 8.0 / 3.0;
};

struct CounterexampleResult {
    double diagonal = 0.0;     // best one-measurement-per-channel scheme
    double non_diagonal = 0.0; // mixed pairs repeat parameter 1 across both channels
};

// Average distortions of the two schemes at the given split. Throws
// ValidationError unless (p11 p1^2 + (p12 + p21) p1 p2) / 2 equals the power
// budget within 1e-9.
CounterexampleResult counterexample(const CounterexampleSpec& spec);

// Counterpart of tlb() without encoder channel knowledge.
TlbResult tlb_no_csi(const CompositeSource& source, const FadingChannel& channel,
                     double avg_power);

} // namespace ltsim
