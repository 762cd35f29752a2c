#include "boomid/paaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "boomid/errors.hpp"

namespace boomid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool near(cplx a, cplx b) {
    return std::abs(a - b) <= 1e-13 * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool near(double a, double b) {
    return std::abs(a - b) <= 1e-13 * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::ptrdiff_t find_support(const std::vector<cplx>& supports, cplx s) {
    for (std::size_t j = 0; j < supports.size(); ++j)
        if (near(supports[j], s)) return static_cast<std::ptrdiff_t>(j);
    return -1;
}

std::ptrdiff_t find_support(const std::vector<double>& supports, double p) {
    for (std::size_t k = 0; k < supports.size(); ++k)
        if (near(supports[k], p)) return static_cast<std::ptrdiff_t>(k);
    return -1;
}

void check_guard(const ParametricBarycentricModel& model, double p, bool force) {
    if (force) return;
    if (model.p_max <= 0.0 && model.p_min <= 0.0) return; // untrained range recorded as 0
    const double lo = model.extrapolation_lo_factor * model.p_min;
    const double hi = model.extrapolation_hi_factor * model.p_max;
    if (p < lo || p > hi)
        throw out_of_range_error("paaa: parameter " + std::to_string(p) +
                                 " outside extrapolation guard [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
}

// Row-restricted limit at s = sigma_j: univariate barycentric sum in p.
cplx eval_row(const ParametricBarycentricModel& model, std::size_t j, double p);
// Column-restricted limit at p = pi_k: univariate barycentric sum in s.
cplx eval_col(const ParametricBarycentricModel& model, std::size_t k, cplx s);
// Full double sum, optionally skipping one support row/column whose
// weights are identically zero (removable singularity).
cplx eval_full(const ParametricBarycentricModel& model, cplx s, double p,
               std::ptrdiff_t skip_row = -1, std::ptrdiff_t skip_col = -1);

bool row_all_zero(const ParametricBarycentricModel& model, std::size_t j) {
    for (std::size_t k = 0; k < model.order_q(); ++k)
        if (model.weight_at(j, k) != cplx(0.0, 0.0)) return false;
    return true;
}

bool col_all_zero(const ParametricBarycentricModel& model, std::size_t k) {
    for (std::size_t j = 0; j < model.order_l(); ++j)
        if (model.weight_at(j, k) != cplx(0.0, 0.0)) return false;
    return true;
}

cplx eval_row(const ParametricBarycentricModel& model, std::size_t j, double p) {
    const std::ptrdiff_t k0 = find_support(model.p_supports, p);
    cplx num(0.0, 0.0), den(0.0, 0.0);
    for (std::size_t k = 0; k < model.order_q(); ++k) {
        const cplx w = model.weight_at(j, k);
        if (k0 >= 0 && k == static_cast<std::size_t>(k0)) {
            if (w != cplx(0.0, 0.0)) return model.value_at(j, k); // interpolation
            continue; // zero-weight singular term contributes nothing in the limit
        }
        const cplx c = w / (p - model.p_supports[k]);
        num += c * model.value_at(j, k);
        den += c;
    }
    if (den == cplx(0.0, 0.0)) {
        if (row_all_zero(model, j)) return eval_full(model, model.s_supports[j], p,
                                                     static_cast<std::ptrdiff_t>(j), k0);
        throw numerical_error("paaa_evaluate: vanishing restricted denominator");
    }
    return num / den;
}

cplx eval_col(const ParametricBarycentricModel& model, std::size_t k, cplx s) {
    const std::ptrdiff_t j0 = find_support(model.s_supports, s);
    cplx num(0.0, 0.0), den(0.0, 0.0);
    for (std::size_t j = 0; j < model.order_l(); ++j) {
        const cplx w = model.weight_at(j, k);
        if (j0 >= 0 && j == static_cast<std::size_t>(j0)) {
            if (w != cplx(0.0, 0.0)) return model.value_at(j, k);
            continue;
        }
        const cplx c = w / (s - model.s_supports[j]);
        num += c * model.value_at(j, k);
        den += c;
    }
    if (den == cplx(0.0, 0.0)) {
        if (col_all_zero(model, k)) return eval_full(model, s, model.p_supports[k],
                                                     j0, static_cast<std::ptrdiff_t>(k));
        throw numerical_error("paaa_evaluate: vanishing restricted denominator");
    }
    return num / den;
}

cplx eval_full(const ParametricBarycentricModel& model, cplx s, double p,
               std::ptrdiff_t skip_row, std::ptrdiff_t skip_col) {
    cplx num(0.0, 0.0), den(0.0, 0.0);
    for (std::size_t j = 0; j < model.order_l(); ++j) {
        if (skip_row >= 0 && j == static_cast<std::size_t>(skip_row)) continue;
        const cplx ds = s - model.s_supports[j];
        for (std::size_t k = 0; k < model.order_q(); ++k) {
            if (skip_col >= 0 && k == static_cast<std::size_t>(skip_col)) continue;
            const cplx c = model.weight_at(j, k) / (ds * (p - model.p_supports[k]));
            num += c * model.value_at(j, k);
            den += c;
        }
    }
    if (den == cplx(0.0, 0.0))
        throw numerical_error("paaa_evaluate: vanishing denominator");
    return num / den;
}

} // namespace

cplx paaa_evaluate(const ParametricBarycentricModel& model, cplx s, double p,
                   bool force_extrapolation) {
    if (model.order_l() == 0 || model.order_q() == 0)
        throw std::invalid_argument("paaa_evaluate: empty model");
    check_guard(model, p, force_extrapolation);

    const std::ptrdiff_t j0 = find_support(model.s_supports, s);
    const std::ptrdiff_t k0 = find_support(model.p_supports, p);
    if (j0 >= 0 && k0 >= 0) {
        const cplx w = model.weight_at(static_cast<std::size_t>(j0), static_cast<std::size_t>(k0));
        if (w != cplx(0.0, 0.0))
            return model.value_at(static_cast<std::size_t>(j0), static_cast<std::size_t>(k0));
        // removable singularity: limit along the nonzero-weight direction
        if (!row_all_zero(model, static_cast<std::size_t>(j0)))
            return eval_row(model, static_cast<std::size_t>(j0), p);
        return eval_col(model, static_cast<std::size_t>(k0), s);
    }
    if (j0 >= 0) return eval_row(model, static_cast<std::size_t>(j0), p);
    if (k0 >= 0) return eval_col(model, static_cast<std::size_t>(k0), s);
    return eval_full(model, s, p);
}

FrfSlice::FrfSlice(const ParametricBarycentricModel& model, double p, bool force_extrapolation) {
    if (model.order_l() == 0 || model.order_q() == 0)
        throw std::invalid_argument("FrfSlice: empty model");
    check_guard(model, p, force_extrapolation);

    s_supports_ = model.s_supports;
    const std::size_t l = model.order_l();
    num_coeff_.assign(l, cplx(0.0, 0.0));
    den_coeff_.assign(l, cplx(0.0, 0.0));
    const std::ptrdiff_t k0 = find_support(model.p_supports, p);
    for (std::size_t j = 0; j < l; ++j) {
        if (k0 >= 0) {
            // at a parameter support only the k0 column survives the limit
            const auto k = static_cast<std::size_t>(k0);
            const cplx w = model.weight_at(j, k);
            num_coeff_[j] = w * model.value_at(j, k);
            den_coeff_[j] = w;
        } else {
            for (std::size_t k = 0; k < model.order_q(); ++k) {
                const cplx c = model.weight_at(j, k) / (p - model.p_supports[k]);
                num_coeff_[j] += c * model.value_at(j, k);
                den_coeff_[j] += c;
            }
        }
    }
}

cplx FrfSlice::eval_s(cplx s) const {
    const std::ptrdiff_t j0 = find_support(s_supports_, s);
    if (j0 >= 0) {
        const auto j = static_cast<std::size_t>(j0);
        if (den_coeff_[j] != cplx(0.0, 0.0)) return num_coeff_[j] / den_coeff_[j];
        cplx num(0.0, 0.0), den(0.0, 0.0);
        for (std::size_t i = 0; i < s_supports_.size(); ++i) {
            if (i == j) continue;
            const cplx d = s - s_supports_[i];
            num += num_coeff_[i] / d;
            den += den_coeff_[i] / d;
        }
        if (den == cplx(0.0, 0.0)) throw numerical_error("FrfSlice: vanishing denominator");
        return num / den;
    }
    cplx num(0.0, 0.0), den(0.0, 0.0);
    for (std::size_t j = 0; j < s_supports_.size(); ++j) {
        const cplx d = s - s_supports_[j];
        num += num_coeff_[j] / d;
        den += den_coeff_[j] / d;
    }
    if (den == cplx(0.0, 0.0)) throw numerical_error("FrfSlice: vanishing denominator");
    return num / den;
}

cplx FrfSlice::operator()(double freq_hz) const {
    return eval_s(cplx(0.0, kTwoPi * freq_hz));
}

FrfSlice slice_at_param(const ParametricBarycentricModel& model, double p,
                        bool force_extrapolation) {
    return FrfSlice(model, p, force_extrapolation);
}

std::pair<std::size_t, std::size_t>
greedy_select(const FrfDataset& dataset, const ParametricBarycentricModel* model) {
    dataset.validate();
    const std::size_t ns = dataset.n_freq();
    const std::size_t np = dataset.n_params();

    std::vector<bool> f_support(ns, false), p_support(np, false);
    if (model != nullptr) {
        for (std::size_t j = 0; j < ns; ++j)
            f_support[j] = find_support(model->s_supports, cplx(0.0, kTwoPi * dataset.freq_hz[j])) >= 0;
        for (std::size_t k = 0; k < np; ++k)
            p_support[k] = find_support(model->p_supports, dataset.params[k]) >= 0;
    }

    cplx mean(0.0, 0.0);
    if (model == nullptr) {
        for (const cplx& v : dataset.values) mean += v;
        mean /= static_cast<double>(dataset.values.size());
    }

    double best = -1.0;
    std::size_t bj = ns, bk = np;
    for (std::size_t j = 0; j < ns; ++j) {
        for (std::size_t k = 0; k < np; ++k) {
            // support pairs are interpolated; every other pair — including
            // those sharing one coordinate with a support, handled by the
            // barycentric limits — competes for the pick
            if (f_support[j] && p_support[k]) continue;
            const cplx ref = (model == nullptr)
                                 ? mean
                                 : paaa_evaluate(*model, cplx(0.0, kTwoPi * dataset.freq_hz[j]),
                                                 dataset.params[k], true);
            const double err = std::abs(dataset.at(j, k) - ref);
            if (err > best) { best = err; bj = j; bk = k; }
        }
    }
    if (bj == ns) throw std::invalid_argument("greedy_select: no non-support grid pair remains");
    return {bj, bk};
}

std::vector<cplx> solve_weights(const FrfDataset& dataset,
                                const std::vector<cplx>& s_supports,
                                const std::vector<double>& p_supports,
                                const std::vector<std::size_t>& support_freq_idx,
                                const std::vector<std::size_t>& support_param_idx,
                                const std::vector<std::size_t>& ls_freq_idx,
                                const std::vector<std::size_t>& ls_param_idx,
                                double* smallest_singular_value) {
    const std::size_t l = s_supports.size();
    const std::size_t q = p_supports.size();
    if (l == 0 || q == 0) throw std::invalid_argument("solve_weights: empty support set");
    if (ls_freq_idx.empty() || ls_param_idx.empty())
        throw order_exhausted_error("solve_weights: LS sample set is empty");

    const auto rows = static_cast<Eigen::Index>(ls_freq_idx.size() * ls_param_idx.size() +
                                                ls_freq_idx.size() * q +
                                                l * ls_param_idx.size());
    const auto cols = static_cast<Eigen::Index>(l * q);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
    Eigen::Index row = 0;
    for (std::size_t fi : ls_freq_idx) {
        const cplx s(0.0, kTwoPi * dataset.freq_hz[fi]);
        for (std::size_t pi : ls_param_idx) {
            const double p = dataset.params[pi];
            const cplx h = dataset.at(fi, pi);
            Eigen::Index col = 0;
            for (std::size_t a = 0; a < l; ++a) {
                const cplx ds = s - s_supports[a];
                for (std::size_t b = 0; b < q; ++b) {
                    const cplx hab = dataset.at(support_freq_idx[a], support_param_idx[b]);
                    A(row, col) = (h - hab) / (ds * (p - p_supports[b]));
                    ++col;
                }
            }
            ++row;
        }
    }
    // cross samples sharing the parameter coordinate with a support: the
    // singular Cauchy factor is cleared by its vanishing limit, leaving a
    // finite row that touches only that support column of the weights
    for (std::size_t fi : ls_freq_idx) {
        const cplx s(0.0, kTwoPi * dataset.freq_hz[fi]);
        for (std::size_t b = 0; b < q; ++b) {
            const cplx h = dataset.at(fi, support_param_idx[b]);
            for (std::size_t a = 0; a < l; ++a) {
                const cplx hab = dataset.at(support_freq_idx[a], support_param_idx[b]);
                A(row, static_cast<Eigen::Index>(a * q + b)) = (h - hab) / (s - s_supports[a]);
            }
            ++row;
        }
    }
    // ... and symmetrically for samples sharing the frequency coordinate
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t pi : ls_param_idx) {
            const double p = dataset.params[pi];
            const cplx h = dataset.at(support_freq_idx[a], pi);
            for (std::size_t b = 0; b < q; ++b) {
                const cplx hab = dataset.at(support_freq_idx[a], support_param_idx[b]);
                A(row, static_cast<Eigen::Index>(a * q + b)) = (h - hab) / (p - p_supports[b]);
            }
            ++row;
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (smallest_singular_value != nullptr)
        *smallest_singular_value = sv(sv.size() - 1);

    Eigen::VectorXcd alpha = svd.matrixV().col(sv.size() - 1);
    // deterministic phase: rotate the largest-magnitude entry to the
    // positive real axis
    Eigen::Index imax = 0;
    alpha.cwiseAbs().maxCoeff(&imax);
    const cplx big = alpha(imax);
    if (std::abs(big) > 0.0) alpha *= std::conj(big) / std::abs(big);
    alpha /= alpha.norm();

    std::vector<cplx> out(static_cast<std::size_t>(cols));
    for (Eigen::Index i = 0; i < cols; ++i) out[static_cast<std::size_t>(i)] = alpha(i);
    return out;
}

std::pair<ParametricBarycentricModel, PaaaDiagnostics>
paaa_fit(const FrfDataset& dataset, const PaaaOptions& opts) {
    dataset.validate();
    const std::size_t ns = dataset.n_freq();
    const std::size_t np = dataset.n_params();
    if (ns < 2) throw std::invalid_argument("paaa_fit: need at least 2 frequency samples");
    if (!(opts.tol_rel > 0.0)) throw std::invalid_argument("paaa_fit: tol_rel must be positive");

    const std::size_t max_l = opts.max_l == 0 ? ns - 1 : opts.max_l;
    const std::size_t max_q = opts.max_q == 0 ? std::max<std::size_t>(np - 1, 1) : opts.max_q;
    if (max_l > ns - 1) throw std::invalid_argument("paaa_fit: max_l exceeds Ns - 1");
    if (np > 1 && max_q > np - 1) throw std::invalid_argument("paaa_fit: max_q exceeds Np - 1");

    double h_max = 0.0;
    for (const cplx& v : dataset.values) h_max = std::max(h_max, std::abs(v));
    if (h_max == 0.0) h_max = 1.0;

    std::vector<std::size_t> sup_f, sup_p;
    std::vector<bool> is_sup_f(ns, false), is_sup_p(np, false);

    ParametricBarycentricModel model;
    model.p_min = dataset.params.front();
    model.p_max = dataset.params.back();
    PaaaDiagnostics diag;

    auto rebuild_model_frame = [&]() {
        model.s_supports.clear();
        model.p_supports.clear();
        model.support_values.clear();
        for (std::size_t j : sup_f) model.s_supports.push_back(cplx(0.0, kTwoPi * dataset.freq_hz[j]));
        for (std::size_t k : sup_p) model.p_supports.push_back(dataset.params[k]);
        model.support_values.resize(sup_f.size() * sup_p.size());
        for (std::size_t a = 0; a < sup_f.size(); ++a)
            for (std::size_t b = 0; b < sup_p.size(); ++b)
                model.support_values[a * sup_p.size() + b] = dataset.at(sup_f[a], sup_p[b]);
    };

    bool have_model = false;
    while (true) {
        // greedy pick over the current LS set
        std::size_t pick_j = ns, pick_k = np;
        {
            double best = -1.0;
            cplx mean(0.0, 0.0);
            if (!have_model) {
                for (const cplx& v : dataset.values) mean += v;
                mean /= static_cast<double>(dataset.values.size());
            }
            for (std::size_t k = 0; k < np; ++k) {
                FrfSlice slice = have_model ? FrfSlice(model, dataset.params[k], true)
                                            : FrfSlice();
                for (std::size_t j = 0; j < ns; ++j) {
                    // only full support pairs are interpolated; cross pairs
                    // (one coordinate at a support) still carry error
                    if (is_sup_f[j] && is_sup_p[k]) continue;
                    const cplx ref = have_model
                                         ? slice.eval_s(cplx(0.0, kTwoPi * dataset.freq_hz[j]))
                                         : mean;
                    const double err = std::abs(dataset.at(j, k) - ref);
                    if (err > best || (err == best && (j < pick_j || (j == pick_j && k < pick_k)))) {
                        best = err;
                        pick_j = j;
                        pick_k = k;
                    }
                }
            }
            if (pick_j == ns)
                throw order_exhausted_error("paaa_fit: no LS samples remain");
        }

        // support-set update, honoring the order caps per axis
        bool grew = false;
        if (!is_sup_f[pick_j] && sup_f.size() < max_l) {
            sup_f.push_back(pick_j);
            is_sup_f[pick_j] = true;
            grew = true;
        }
        if (!is_sup_p[pick_k] && sup_p.size() < max_q) {
            sup_p.push_back(pick_k);
            is_sup_p[pick_k] = true;
            grew = true;
        }
        if (!grew) {
            diag.stopped_reason = PaaaStop::max_order;
            break;
        }
        diag.selected_pairs.emplace_back(pick_j, pick_k);
        rebuild_model_frame();

        std::vector<std::size_t> ls_f, ls_p;
        for (std::size_t j = 0; j < ns; ++j)
            if (!is_sup_f[j]) ls_f.push_back(j);
        for (std::size_t k = 0; k < np; ++k)
            if (!is_sup_p[k]) ls_p.push_back(k);
        if (ls_f.empty() || ls_p.empty())
            throw order_exhausted_error("paaa_fit: LS matrix is empty");

        model.weights = solve_weights(dataset, model.s_supports, model.p_supports,
                                      sup_f, sup_p, ls_f, ls_p);
        have_model = true;

        // max relative error over every non-interpolated grid pair
        double max_err = 0.0;
        for (std::size_t k = 0; k < np; ++k) {
            FrfSlice slice(model, dataset.params[k], true);
            for (std::size_t j = 0; j < ns; ++j) {
                if (is_sup_f[j] && is_sup_p[k]) continue;
                const cplx ref = slice.eval_s(cplx(0.0, kTwoPi * dataset.freq_hz[j]));
                max_err = std::max(max_err, std::abs(dataset.at(j, k) - ref));
            }
        }
        const double rel = max_err / h_max;
        diag.error_history.push_back(rel);

        if (rel <= opts.tol_rel) {
            diag.stopped_reason = PaaaStop::tolerance;
            break;
        }
        if (sup_f.size() >= max_l && sup_p.size() >= max_q) {
            diag.stopped_reason = PaaaStop::max_order;
            break;
        }
        const std::size_t n = diag.error_history.size();
        const auto win = static_cast<std::size_t>(opts.stagnation_window);
        if (win > 0 && n > win) {
            const double past = diag.error_history[n - 1 - win];
            if (diag.error_history[n - 1] > past * (1.0 - opts.stagnation_drop)) {
                diag.stopped_reason = PaaaStop::ls_stagnation;
                break;
            }
        }
    }

    if (!have_model)
        throw order_exhausted_error("paaa_fit: no model could be constructed");
    return {std::move(model), std::move(diag)};
}

} // namespace boomid
