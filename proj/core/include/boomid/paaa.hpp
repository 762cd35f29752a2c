#ifndef BOOMID_PAAA_HPP
#define BOOMID_PAAA_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boomid/frf.hpp"

namespace boomid {

/// Two-variable barycentric rational model over (frequency, load).
///
///              sum_jk w[j][k] h[j][k] / ((s - sigma_j)(p - pi_k))
///   H(s, p) =  --------------------------------------------------
///              sum_jk w[j][k]         / ((s - sigma_j)(p - pi_k))
///
/// Supports are drawn from the training grid; ||weights||_F = 1.
struct ParametricBarycentricModel {
    std::vector<cplx> s_supports;        // length l, values i*2*pi*f
    std::vector<double> p_supports;      // length q
    std::vector<cplx> support_values;    // l*q row-major (s outer)
    std::vector<cplx> weights;           // l*q row-major, Frobenius-normalized
    double extrapolation_lo_factor = 0.5; // guard: p in [lo*p_min, hi*p_max]
    double extrapolation_hi_factor = 2.0;
    double p_min = 0.0, p_max = 0.0;     // training parameter range

    std::size_t order_l() const { return s_supports.size(); }
    std::size_t order_q() const { return p_supports.size(); }
    cplx value_at(std::size_t j, std::size_t k) const { return support_values[j * p_supports.size() + k]; }
    cplx weight_at(std::size_t j, std::size_t k) const { return weights[j * p_supports.size() + k]; }
};

enum class PaaaStop { tolerance, max_order, ls_stagnation };

struct PaaaDiagnostics {
    std::vector<double> error_history;                  // max relative LS error per iteration
    std::vector<std::pair<std::size_t, std::size_t>> selected_pairs; // (freq idx, param idx)
    PaaaStop stopped_reason = PaaaStop::tolerance;
};

struct PaaaOptions {
    double tol_rel = 1e-8;
    std::size_t max_l = 0;   // 0 means Ns - 1
    std::size_t max_q = 0;   // 0 means Np - 1
    double stagnation_drop = 1e-3; // min relative improvement ...
    int stagnation_window = 5;     // ... over this many iterations
};

/// Greedy interpolation / linearized-LS construction of the parametric
/// barycentric model. Relative errors normalize by max |h_jk| over the
/// dataset. Hitting the order caps before the tolerance returns the best
/// model with stopped_reason = max_order.
std::pair<ParametricBarycentricModel, PaaaDiagnostics>
paaa_fit(const FrfDataset& dataset, const PaaaOptions& opts);

/// argmax over LS-set pairs of |h_jk - H(s_j, p_k)|; the empty model uses
/// the dataset mean as reference. Ties break to the lowest frequency
/// index, then the lowest parameter index.
std::pair<std::size_t, std::size_t>
greedy_select(const FrfDataset& dataset, const ParametricBarycentricModel* model);

/// Right singular vector of the smallest singular value of the linearized
/// LS matrix, reshaped l x q and Frobenius-normalized. ls_rows/ls_cols are
/// the dataset indices forming the LS sample set.
std::vector<cplx> solve_weights(const FrfDataset& dataset,
                                const std::vector<cplx>& s_supports,
                                const std::vector<double>& p_supports,
                                const std::vector<std::size_t>& support_freq_idx,
                                const std::vector<std::size_t>& support_param_idx,
                                const std::vector<std::size_t>& ls_freq_idx,
                                const std::vector<std::size_t>& ls_param_idx,
                                double* smallest_singular_value = nullptr);

/// Evaluate the barycentric form, taking the analytic limit when s or p
/// lands on a support (1e-13 relative). force_extrapolation disables the
/// parameter-range guard.
cplx paaa_evaluate(const ParametricBarycentricModel& model, cplx s, double p,
                   bool force_extrapolation = false);

/// Univariate FRF at fixed load: the p-dependent barycentric coefficients
/// are folded in once, then evaluation is a single barycentric sum in s.
class FrfSlice {
public:
    FrfSlice() = default;
    FrfSlice(const ParametricBarycentricModel& model, double p, bool force_extrapolation = false);
    cplx operator()(double freq_hz) const;
    cplx eval_s(cplx s) const;

private:
    std::vector<cplx> s_supports_;
    std::vector<cplx> num_coeff_;  // per-support folded numerator weight
    std::vector<cplx> den_coeff_;  // per-support folded denominator weight
};

FrfSlice slice_at_param(const ParametricBarycentricModel& model, double p,
                        bool force_extrapolation = false);

} // namespace boomid

#endif
