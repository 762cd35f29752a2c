#ifndef BOOMID_VECFIT_HPP
#define BOOMID_VECFIT_HPP

#include <complex>
#include <vector>

#include "boomid/signal.hpp"

namespace boomid {

/// Barycentric numerator/denominator pair sharing one node set.
/// Non-real nodes appear in conjugate pairs with conjugate weights.
struct BarycentricModel1D {
    std::vector<cplx> nodes;
    std::vector<cplx> num_weights;
    std::vector<cplx> den_weights;
};

/// H(s) = sum_i residues[i] / (s - poles[i]).
struct PoleResidueModel {
    std::vector<cplx> poles;
    std::vector<cplx> residues;
};

struct FitDiagnostics {
    int iterations = 0;
    double final_weighted_ls_error = 0.0;
    std::vector<double> pole_movement_history;
    bool converged = false;
};

struct VfOptions {
    double tol = 1e-6;            // max relative node movement
    int max_iters = 30;
    bool enforce_stability = true; // reflect right-half-plane poles
    bool relaxed = false;          // relaxed nontriviality constraint (FRVF-style)
};

/// Sanathanan-Koerner iteration in barycentric form over samples
/// H(i 2 pi f_j). order_r must be even and >= 2; weights empty means unity.
/// Final residues come from one linear LS with the denominator frozen at 1.
std::pair<PoleResidueModel, FitDiagnostics>
vf_fit(const std::vector<double>& freq_hz, const std::vector<cplx>& values,
       int order_r, const std::vector<double>& weights = {},
       const VfOptions& opts = {});

/// Zeros of d(s) = 1 + sum_i den_weights[i]/(s - nodes[i]), computed as
/// eigenvalues of diag(nodes) - ones * den_weights^T (realified when the
/// input is conjugate-closed, so closure is preserved structurally).
std::vector<cplx> relocate_poles(const std::vector<cplx>& nodes,
                                 const std::vector<cplx>& den_weights);

/// sum_i residues[i] / (i 2 pi f - poles[i]) per grid point.
std::vector<cplx> pr_evaluate(const PoleResidueModel& model,
                              const std::vector<double>& freq_hz);

cplx pr_evaluate_at(const PoleResidueModel& model, cplx s);

} // namespace boomid

#endif
