#include "boomid/vecfit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "boomid/errors.hpp"

namespace boomid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Conjugate-closed node sets are handled on a realified partial-fraction
// basis: a real node contributes 1/(s-a) with a real coefficient, a
// conjugate pair contributes the two real-coefficient combinations
//   g0 = 1/(s-l) + 1/(s-conj(l)),  g1 = i/(s-l) - i/(s-conj(l)),
// so the complex weight at l is c0 + i*c1. This enforces closure
// structurally; every LS normal system stays real.
struct BasisEntry {
    bool pair = false;
    cplx node; // positive-imag member for pairs
};

bool is_conjugate_closed(const std::vector<cplx>& nodes) {
    std::vector<bool> used(nodes.size(), false);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (used[i]) continue;
        const double tol = 1e-9 * (1.0 + std::abs(nodes[i]));
        if (std::abs(nodes[i].imag()) <= tol) { used[i] = true; continue; }
        bool matched = false;
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (!used[j] && std::abs(nodes[j] - std::conj(nodes[i])) <= tol) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

// Canonical order: ascending real part, then |imag|; pairs stored once via
// their positive-imag member.
std::vector<BasisEntry> build_basis(const std::vector<cplx>& nodes) {
    std::vector<BasisEntry> basis;
    std::vector<bool> used(nodes.size(), false);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (used[i]) continue;
        const double tol = 1e-9 * (1.0 + std::abs(nodes[i]));
        if (std::abs(nodes[i].imag()) <= tol) {
            basis.push_back({false, cplx(nodes[i].real(), 0.0)});
            used[i] = true;
            continue;
        }
        std::size_t match = nodes.size();
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (!used[j] && std::abs(nodes[j] - std::conj(nodes[i])) <= tol) { match = j; break; }
        }
        if (match == nodes.size())
            throw std::invalid_argument("vecfit: nodes are not conjugate-closed");
        used[i] = used[match] = true;
        cplx up = nodes[i].imag() > 0.0 ? nodes[i] : nodes[match];
        basis.push_back({true, up});
    }
    std::sort(basis.begin(), basis.end(), [](const BasisEntry& a, const BasisEntry& b) {
        if (a.node.real() != b.node.real()) return a.node.real() < b.node.real();
        return std::abs(a.node.imag()) < std::abs(b.node.imag());
    });
    return basis;
}

std::size_t basis_dof(const std::vector<BasisEntry>& basis) {
    std::size_t n = 0;
    for (const auto& e : basis) n += e.pair ? 2 : 1;
    return n;
}

// Column values of the realified basis at one sample point.
void basis_values(const std::vector<BasisEntry>& basis, cplx s, std::vector<cplx>& out) {
    out.clear();
    for (const auto& e : basis) {
        if (!e.pair) {
            out.push_back(1.0 / (s - e.node));
        } else {
            const cplx a = 1.0 / (s - e.node);
            const cplx b = 1.0 / (s - std::conj(e.node));
            out.push_back(a + b);
            out.push_back(cplx(0.0, 1.0) * (a - b));
        }
    }
}

// Real coefficient vector -> complex weights aligned with the expanded
// node list (pairs expanded as l, conj(l)).
void expand_weights(const std::vector<BasisEntry>& basis, const Eigen::VectorXd& coeff,
                    std::vector<cplx>& nodes, std::vector<cplx>& weights) {
    nodes.clear();
    weights.clear();
    std::size_t c = 0;
    for (const auto& e : basis) {
        if (!e.pair) {
            nodes.push_back(e.node);
            weights.push_back(cplx(coeff[static_cast<Eigen::Index>(c)], 0.0));
            c += 1;
        } else {
            const cplx w(coeff[static_cast<Eigen::Index>(c)], coeff[static_cast<Eigen::Index>(c + 1)]);
            nodes.push_back(e.node);
            weights.push_back(w);
            nodes.push_back(std::conj(e.node));
            weights.push_back(std::conj(w));
            c += 2;
        }
    }
}

std::vector<cplx> sort_canonical(std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
        return a.imag() > b.imag();
    });
    return v;
}

double node_movement(const std::vector<cplx>& before, const std::vector<cplx>& after) {
    double worst = 0.0;
    for (const cplx& n : after) {
        double best = std::numeric_limits<double>::infinity();
        double scale = 1.0;
        for (const cplx& o : before) {
            const double d = std::abs(n - o);
            if (d < best) { best = d; scale = std::max(std::abs(o), 1e-30); }
        }
        worst = std::max(worst, best / scale);
    }
    return worst;
}

} // namespace

std::vector<cplx> relocate_poles(const std::vector<cplx>& nodes,
                                 const std::vector<cplx>& den_weights) {
    if (nodes.size() != den_weights.size())
        throw std::invalid_argument("relocate_poles: length mismatch");
    if (nodes.empty()) return {};
    bool all_zero = true;
    for (const cplx& w : den_weights)
        if (w != cplx(0.0, 0.0)) { all_zero = false; break; }
    if (all_zero) return nodes; // d(s) == 1, nothing moves

    const auto r = static_cast<Eigen::Index>(nodes.size());
    if (is_conjugate_closed(nodes)) {
        // realified companion: real node -> 1x1 block [a], pair a+-ib ->
        // [[a, b], [-b, a]] with input vector [2, 0] and weight row [u, v]
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r, r);
        Eigen::VectorXd bvec = Eigen::VectorXd::Zero(r);
        Eigen::VectorXd wrow = Eigen::VectorXd::Zero(r);

        std::vector<bool> used(nodes.size(), false);
        Eigen::Index pos = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (used[i]) continue;
            const double tol = 1e-9 * (1.0 + std::abs(nodes[i]));
            if (std::abs(nodes[i].imag()) <= tol) {
                A(pos, pos) = nodes[i].real();
                bvec(pos) = 1.0;
                wrow(pos) = den_weights[i].real();
                used[i] = true;
                pos += 1;
                continue;
            }
            std::size_t match = 0;
            for (std::size_t j = i + 1; j < nodes.size(); ++j)
                if (!used[j] && std::abs(nodes[j] - std::conj(nodes[i])) <= tol) { match = j; break; }
            const bool i_up = nodes[i].imag() > 0.0;
            const cplx lam = i_up ? nodes[i] : nodes[match];
            const cplx psi = i_up ? den_weights[i] : den_weights[match];
            A(pos, pos) = lam.real();
            A(pos, pos + 1) = lam.imag();
            A(pos + 1, pos) = -lam.imag();
            A(pos + 1, pos + 1) = lam.real();
            bvec(pos) = 2.0;
            wrow(pos) = psi.real();
            wrow(pos + 1) = psi.imag();
            used[i] = used[match] = true;
            pos += 2;
        }

        Eigen::MatrixXd M = A - bvec * wrow.transpose();
        Eigen::EigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success)
            throw numerical_error("relocate_poles: real eigensolver failed to converge");
        std::vector<cplx> zeros(nodes.size());
        for (Eigen::Index i = 0; i < r; ++i) zeros[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        return sort_canonical(std::move(zeros));
    }

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        M(i, i) = nodes[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < r; ++j)
            M(i, j) -= den_weights[static_cast<std::size_t>(j)];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success)
        throw numerical_error("relocate_poles: complex eigensolver failed to converge");
    std::vector<cplx> zeros(nodes.size());
    for (Eigen::Index i = 0; i < r; ++i) zeros[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return sort_canonical(std::move(zeros));
}

std::vector<cplx> pr_evaluate(const PoleResidueModel& model, const std::vector<double>& freq_hz) {
    std::vector<cplx> out(freq_hz.size());
    for (std::size_t i = 0; i < freq_hz.size(); ++i)
        out[i] = pr_evaluate_at(model, cplx(0.0, kTwoPi * freq_hz[i]));
    return out;
}

cplx pr_evaluate_at(const PoleResidueModel& model, cplx s) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < model.poles.size(); ++i) {
        const cplx d = s - model.poles[i];
        if (std::abs(d) < 1e-12 * (1.0 + std::abs(model.poles[i])))
            throw pole_collision_error("pr_evaluate: evaluation point coincides with a pole");
        acc += model.residues[i] / d;
    }
    return acc;
}

std::pair<PoleResidueModel, FitDiagnostics>
vf_fit(const std::vector<double>& freq_hz, const std::vector<cplx>& values,
       int order_r, const std::vector<double>& weights, const VfOptions& opts) {
    const std::size_t ns = freq_hz.size();
    if (values.size() != ns) throw std::invalid_argument("vf_fit: freq/value length mismatch");
    if (order_r < 2 || order_r % 2 != 0)
        throw std::invalid_argument("vf_fit: order_r must be even and >= 2");
    if (ns < 2 * static_cast<std::size_t>(order_r))
        throw std::invalid_argument("vf_fit: order too high for sample count");
    std::vector<double> w = weights;
    if (w.empty()) w.assign(ns, 1.0);
    if (w.size() != ns) throw std::invalid_argument("vf_fit: weight length mismatch");
    for (double wi : w)
        if (!(wi > 0.0)) throw std::invalid_argument("vf_fit: weights must be positive");

    std::vector<cplx> s_pts(ns);
    for (std::size_t i = 0; i < ns; ++i) s_pts[i] = cplx(0.0, kTwoPi * freq_hz[i]);

    // initial poles: conjugate pairs, imaginary parts spanning the sample
    // band, real parts -imag/100
    const double f_hi = *std::max_element(freq_hz.begin(), freq_hz.end());
    double f_lo = f_hi;
    for (double f : freq_hz)
        if (f > 0.0) f_lo = std::min(f_lo, f);
    if (!(f_lo > 0.0) || f_lo == f_hi) f_lo = f_hi / 100.0;
    const int n_pairs = order_r / 2;
    std::vector<cplx> nodes;
    for (int k = 0; k < n_pairs; ++k) {
        const double frac = n_pairs == 1 ? 0.5
                                         : static_cast<double>(k) / static_cast<double>(n_pairs - 1);
        const double beta = kTwoPi * (f_lo + frac * (f_hi - f_lo));
        nodes.push_back(cplx(-beta / 100.0, beta));
        nodes.push_back(cplx(-beta / 100.0, -beta));
    }

    FitDiagnostics diag;
    const auto r = static_cast<std::size_t>(order_r);
    Eigen::VectorXd phi, psi;
    std::vector<BasisEntry> basis;

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        basis = build_basis(nodes);
        const std::size_t dof = basis_dof(basis);
        const bool relaxed = opts.relaxed;
        const auto cols = static_cast<Eigen::Index>(2 * dof + (relaxed ? 1 : 0));
        const auto rows = static_cast<Eigen::Index>(2 * ns + (relaxed ? 1 : 0));
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);

        std::vector<cplx> g;
        for (std::size_t i = 0; i < ns; ++i) {
            basis_values(basis, s_pts[i], g);
            const double sw = std::sqrt(w[i]);
            const cplx h = values[i];
            for (std::size_t c = 0; c < dof; ++c) {
                const cplx num_col = g[c];
                const cplx den_col = -h * g[c];
                A(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(c)) = sw * num_col.real();
                A(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(c)) = sw * num_col.imag();
                A(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(dof + c)) = sw * den_col.real();
                A(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(dof + c)) = sw * den_col.imag();
            }
            if (relaxed) {
                A(static_cast<Eigen::Index>(2 * i), cols - 1) = -sw * h.real();
                A(static_cast<Eigen::Index>(2 * i + 1), cols - 1) = -sw * h.imag();
            } else {
                rhs(static_cast<Eigen::Index>(2 * i)) = sw * h.real();
                rhs(static_cast<Eigen::Index>(2 * i + 1)) = sw * h.imag();
            }
        }
        if (relaxed) {
            // nontriviality: the real part of the denominator sums to Ns
            const double scale = std::sqrt(static_cast<double>(ns));
            for (std::size_t i = 0; i < ns; ++i) {
                basis_values(basis, s_pts[i], g);
                for (std::size_t c = 0; c < dof; ++c)
                    A(rows - 1, static_cast<Eigen::Index>(dof + c)) += scale * g[c].real();
                A(rows - 1, cols - 1) += scale;
            }
            rhs(rows - 1) = scale * static_cast<double>(ns);
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() < cols)
            throw rank_deficiency_error("vf_fit: singular LS system at iteration " +
                                        std::to_string(iter), iter);
        Eigen::VectorXd x = qr.solve(rhs);

        phi = x.head(static_cast<Eigen::Index>(dof));
        psi = x.segment(static_cast<Eigen::Index>(dof), static_cast<Eigen::Index>(dof));
        if (relaxed) {
            const double d0 = x(cols - 1);
            if (std::abs(d0) < 1e-14)
                throw rank_deficiency_error("vf_fit: relaxed constant collapsed at iteration " +
                                            std::to_string(iter), iter);
            phi /= d0;
            psi /= d0;
        }

        std::vector<cplx> exp_nodes, den_w;
        expand_weights(basis, psi, exp_nodes, den_w);
        std::vector<cplx> new_nodes = relocate_poles(exp_nodes, den_w);
        if (opts.enforce_stability) {
            for (cplx& p : new_nodes)
                if (p.real() > 0.0) p = cplx(-p.real(), p.imag());
        }
        new_nodes = sort_canonical(std::move(new_nodes));

        const double move = node_movement(nodes, new_nodes);
        diag.pole_movement_history.push_back(move);
        diag.iterations = iter;
        nodes = std::move(new_nodes);
        if (move < opts.tol) { diag.converged = true; break; }
    }

    // final residues: one linear LS with the denominator frozen at 1
    basis = build_basis(nodes);
    const std::size_t dof = basis_dof(basis);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * ns),
                                              static_cast<Eigen::Index>(dof));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(2 * ns));
    std::vector<cplx> g;
    for (std::size_t i = 0; i < ns; ++i) {
        basis_values(basis, s_pts[i], g);
        const double sw = std::sqrt(w[i]);
        for (std::size_t c = 0; c < dof; ++c) {
            A(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(c)) = sw * g[c].real();
            A(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(c)) = sw * g[c].imag();
        }
        rhs(static_cast<Eigen::Index>(2 * i)) = sw * values[i].real();
        rhs(static_cast<Eigen::Index>(2 * i + 1)) = sw * values[i].imag();
    }
    Eigen::VectorXd res_coeff = A.householderQr().solve(rhs);

    PoleResidueModel model;
    expand_weights(basis, res_coeff, model.poles, model.residues);
    if (model.poles.size() != r)
        throw numerical_error("vf_fit: pole count changed during relocation");

    double err = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        cplx v(0.0, 0.0);
        for (std::size_t k = 0; k < model.poles.size(); ++k)
            v += model.residues[k] / (s_pts[i] - model.poles[k]);
        err += w[i] * std::norm(values[i] - v);
    }
    diag.final_weighted_ls_error = err;
    return {std::move(model), std::move(diag)};
}

} // namespace boomid
