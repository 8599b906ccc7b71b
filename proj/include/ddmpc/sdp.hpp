#pragma once

// Conic standard form for the LMI problems and a dense primal-dual
// interior-point solver (HKM direction, Mehrotra predictor-corrector).
//
// Programs are stated as
//     minimize c^T y  subject to  F_j(y) = C_j + sum_i y_i A_ij >= 0,
// with scalar lower bounds lowered to 1x1 blocks. The solver works on the
// pair  max -<C, X> s.t. <A_i, X> = -c_i, X >= 0  and its dual in y.

#include "ddmpc/lmi.hpp"
#include "ddmpc/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ddmpc {

struct PsdBlock {
    std::string name;
    Matrix constant;
    std::vector<std::pair<int, Matrix>> coeffs;

    Eigen::Index side() const { return constant.rows(); }

    Matrix evaluate(const Vector& y) const {
        Matrix out = constant;
        for (const auto& [k, c] : coeffs) out += y(k) * c;
        return out;
    }
};

struct ConicProgram {
    int num_vars = 0;
    Vector objective;
    std::vector<PsdBlock> psd_blocks;
    Vector lower_bounds;  // -inf when unbounded below
    Vector upper_bounds;  // +inf when unbounded above (empty = none)
    std::vector<std::string> var_names;

    void validate() const {
        if (objective.size() != num_vars) throw DimensionError("ConicProgram: objective length");
        if (lower_bounds.size() != num_vars) throw DimensionError("ConicProgram: lower bound length");
        if (upper_bounds.size() != 0 && upper_bounds.size() != num_vars) throw DimensionError("ConicProgram: upper bound length");
        for (const auto& b : psd_blocks) {
            if (b.constant.rows() != b.constant.cols() || b.side() < 1) throw DimensionError("ConicProgram: block " + b.name + " not square");
            for (const auto& [k, c] : b.coeffs) {
                if (k < 0 || k >= num_vars) throw DimensionError("ConicProgram: block " + b.name + " references bad variable");
                if (c.rows() != b.side() || c.cols() != b.side()) throw DimensionError("ConicProgram: coefficient side in " + b.name);
            }
        }
    }
};

struct SolverSettings {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iters = 200;
    double delta = 1e-6;
    double box_radius = 1e6;  // phase-1 box used to classify infeasibility
    double epsilon_cap = 1e7;  // bound on epsilon * ||data term||_2; inf disables
    bool precondition = true;  // congruence-normalize data blocks before solving

    void validate() const {
        if (!(feas_tol > 0.0) || !(gap_tol > 0.0) || !(delta > 0.0) || max_iters < 1) {
            throw std::invalid_argument("SolverSettings: tolerances must be positive");
        }
    }
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iters, numerical_failure };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::max_iters: return "max_iters";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

struct BlockResidual {
    std::string name;
    double min_eig;
};

struct Solution {
    SolveStatus status = SolveStatus::numerical_failure;
    Vector point;
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    std::vector<BlockResidual> residuals;
    double gap = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    std::optional<double> phase1_value;  // optimal s of the phase-1 program, when run
    std::string message;
};

namespace detail {

/// Congruence T with T' G T = diag(1 on range(G), 0 elsewhere) for PSD G.
inline Matrix range_normalizer(const Matrix& G) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.transpose()));
    const Vector& lam = es.eigenvalues();
    const double top = lam.cwiseAbs().maxCoeff();
    Vector scale(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) scale(i) = lam(i) > 1e-12 * top ? 1.0 / std::sqrt(lam(i)) : 1.0;
    return es.eigenvectors() * scale.asDiagonal();
}

}  // namespace detail

/// One variable per coordinate; margins folded into block constants;
/// alpha, eta, epsilon bounded below by delta and epsilon bounded above by
/// epsilon_cap / ||data term||. With precondition set, every block carrying
/// a data term is replaced by the congruent block T' F T (same PSD set).
inline ConicProgram lower(const LmiProblem& p, const SolverSettings& s) {
    s.validate();
    ConicProgram cp;
    cp.num_vars = static_cast<int>(p.vars.size());
    cp.var_names = p.vars.names;
    cp.objective = Vector::Zero(cp.num_vars);
    cp.objective(p.objective_index()) = 1.0;
    cp.lower_bounds = Vector::Constant(cp.num_vars, -std::numeric_limits<double>::infinity());
    cp.upper_bounds = Vector::Constant(cp.num_vars, std::numeric_limits<double>::infinity());
    const double lb = p.delta;
    cp.lower_bounds(p.vars.alpha_index()) = lb;
    cp.lower_bounds(p.vars.eta_index()) = lb;
    const std::size_t n_eps = p.vars.vertex_eps == 0 ? 1 : p.vars.vertex_eps;
    std::vector<int> eps_idx;
    for (std::size_t j = 0; j < n_eps; ++j) {
        eps_idx.push_back(p.vars.epsilon_index(j));
        cp.lower_bounds(eps_idx.back()) = lb;
    }
    for (const auto& b : p.constraints) {
        PsdBlock pb;
        pb.name = b.name;
        pb.constant = b.constant - b.margin * Matrix::Identity(b.side(), b.side());
        pb.coeffs = b.coeffs;
        for (const auto& [k, c] : b.coeffs) {
            if (std::find(eps_idx.begin(), eps_idx.end(), k) == eps_idx.end()) continue;
            Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
            const double top = es.eigenvalues().maxCoeff();
            if (top > 0.0 && std::isfinite(s.epsilon_cap)) {
                cp.upper_bounds(k) = std::min(cp.upper_bounds(k), s.epsilon_cap / top);
            }
            if (s.precondition && top > 0.0) {
                const Matrix T = detail::range_normalizer(c);
                pb.constant = T.transpose() * pb.constant * T;
                for (auto& [kk, cc] : pb.coeffs) cc = T.transpose() * cc * T;
            }
        }
        cp.psd_blocks.push_back(std::move(pb));
    }
    cp.validate();
    return cp;
}

/// Per-block minimum eigenvalues of the raw blocks at a decision point.
struct SolutionCheck {
    std::vector<BlockResidual> blocks;
    double min_scalar = 0.0;  // min(alpha, eta, epsilon)
    bool pass = false;
};

inline SolutionCheck check_solution(const LmiProblem& p, const DecisionPoint& dp, double tol) {
    SolutionCheck c;
    c.pass = true;
    for (const auto& [name, m] : evaluate(p, dp)) {
        const double e = min_eigenvalue(m);
        c.blocks.push_back({name, e});
        if (!(e >= -tol)) c.pass = false;
    }
    c.min_scalar = std::min(dp.alpha, dp.eta);
    if (dp.vertex_epsilon.empty()) {
        c.min_scalar = std::min(c.min_scalar, dp.epsilon);
    } else {
        for (double e : dp.vertex_epsilon) c.min_scalar = std::min(c.min_scalar, e);
    }
    if (!(c.min_scalar > 0.0)) c.pass = false;
    return c;
}

/// Sparse triplet listing: block id, row, col, variable id or CONST, value.
/// Upper triangle only; scalar bounds are exported as extra 1x1 blocks.
inline void export_triplets(std::ostream& os, const ConicProgram& cp) {
    os << "# vars " << cp.num_vars << " blocks " << cp.psd_blocks.size() << '\n';
    os << "# objective";
    for (int i = 0; i < cp.num_vars; ++i) os << ' ' << cp.objective(i);
    os << '\n';
    auto emit = [&](std::size_t id, const Matrix& m, const std::string& var) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = i; j < m.cols(); ++j) {
                if (m(i, j) != 0.0) {
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
                    os << id << ' ' << i << ' ' << j << ' ' << var << ' ' << buf << '\n';
                }
            }
        }
    };
    std::size_t id = 0;
    for (const auto& b : cp.psd_blocks) {
        emit(id, b.constant, "CONST");
        for (const auto& [k, c] : b.coeffs) emit(id, c, std::to_string(k));
        ++id;
    }
    for (int i = 0; i < cp.num_vars; ++i) {
        if (!std::isfinite(cp.lower_bounds(i))) continue;
        emit(id, Matrix::Constant(1, 1, -cp.lower_bounds(i)), "CONST");
        emit(id, Matrix::Ones(1, 1), std::to_string(i));
        ++id;
    }
}

namespace detail {

/// Dense block-diagonal SDP data in the solver's own convention:
/// Z = C - sum y_i A_i >= 0, maximize b^T y.
struct SdpData {
    int k = 0;
    Vector b;
    std::vector<Matrix> C;
    std::vector<std::vector<std::pair<int, Matrix>>> A;  // per block: (var, A_i)
    Vector var_scale;  // solver works in yhat = var_scale .* y

    Vector unscale(const Vector& yhat) const { return yhat.cwiseQuotient(var_scale); }
};

/// Ruiz-style equilibration: blocks and variables are rescaled so every
/// coefficient matrix has Frobenius norm near one. PSD sets are unchanged.
inline void equilibrate(SdpData& d, int rounds = 4) {
    d.var_scale = Vector::Ones(d.k);
    for (int r = 0; r < rounds; ++r) {
        for (std::size_t j = 0; j < d.C.size(); ++j) {
            double mx = 0.0;
            for (const auto& [i, a] : d.A[j]) mx = std::max(mx, a.norm());
            if (!(mx > 0.0)) continue;
            const double f = 1.0 / std::sqrt(mx);
            d.C[j] *= f;
            for (auto& [i, a] : d.A[j]) a *= f;
        }
        Vector mx = Vector::Zero(d.k);
        for (const auto& blk : d.A) {
            for (const auto& [i, a] : blk) mx(i) = std::max(mx(i), a.norm());
        }
        for (int i = 0; i < d.k; ++i) {
            if (!(mx(i) > 0.0)) mx(i) = 1.0;
            mx(i) = std::sqrt(mx(i));
        }
        for (auto& blk : d.A) {
            for (auto& [i, a] : blk) a /= mx(i);
        }
        d.b = d.b.cwiseQuotient(mx);
        d.var_scale = d.var_scale.cwiseProduct(mx);
    }
}

inline SdpData to_sdp_data(const ConicProgram& cp) {
    SdpData d;
    d.k = cp.num_vars;
    d.b = -cp.objective;
    auto add_block = [&](const Matrix& c, const std::vector<std::pair<int, Matrix>>& coeffs) {
        d.C.push_back(c);
        std::vector<std::pair<int, Matrix>> a;
        for (const auto& [i, m] : coeffs) a.emplace_back(i, -m);
        d.A.push_back(std::move(a));
    };
    for (const auto& blk : cp.psd_blocks) add_block(blk.constant, blk.coeffs);
    for (int i = 0; i < cp.num_vars; ++i) {
        if (std::isfinite(cp.lower_bounds(i))) {
            add_block(Matrix::Constant(1, 1, -cp.lower_bounds(i)), {{i, Matrix::Ones(1, 1)}});
        }
        if (cp.upper_bounds.size() > 0 && std::isfinite(cp.upper_bounds(i))) {
            add_block(Matrix::Constant(1, 1, cp.upper_bounds(i)), {{i, -Matrix::Ones(1, 1)}});
        }
    }
    equilibrate(d);
    return d;
}

inline double frob_dot(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

/// Largest step t <= 1/tau with X + t dX >= 0 (returns +inf if unbounded).
inline double max_step(const Matrix& X, const Matrix& dX) {
    Eigen::LLT<Matrix> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const Matrix Linv = llt.matrixL().solve(Matrix::Identity(X.rows(), X.cols()));
    const Matrix W = Linv * dX * Linv.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct IpmResult {
    SolveStatus status = SolveStatus::numerical_failure;
    Vector y;
    double pobj = 0.0, dobj = 0.0;
    int iterations = 0;
    bool diverged = false;
    std::string message;
};

inline IpmResult ipm(const SdpData& d, const SolverSettings& s) {
    const std::size_t nb = d.C.size();
    IpmResult res;
    res.y = Vector::Zero(d.k);
    if (d.k == 0 || nb == 0) {
        res.status = SolveStatus::numerical_failure;
        res.message = "empty program";
        return res;
    }

    // A variable that appears in no block with nonzero objective is unbounded.
    std::vector<bool> used(static_cast<std::size_t>(d.k), false);
    for (const auto& blk : d.A) {
        for (const auto& [i, m] : blk) {
            if (m.cwiseAbs().maxCoeff() > 0.0) used[static_cast<std::size_t>(i)] = true;
        }
    }
    for (int i = 0; i < d.k; ++i) {
        if (!used[static_cast<std::size_t>(i)] && d.b(i) != 0.0) {
            res.status = SolveStatus::unbounded;
            res.diverged = true;
            res.message = "variable " + std::to_string(i) + " is unconstrained";
            return res;
        }
    }

    double norm_c = 0.0, norm_a = 0.0;
    Eigen::Index ntot = 0;
    for (std::size_t j = 0; j < nb; ++j) {
        norm_c = std::max(norm_c, d.C[j].norm());
        for (const auto& [i, m] : d.A[j]) norm_a = std::max(norm_a, m.norm());
        ntot += d.C[j].rows();
    }
    const double norm_b = d.b.norm();
    double xi_x = 10.0, xi_z = std::max({10.0, norm_c, norm_a});
    for (int i = 0; i < d.k; ++i) xi_x = std::max(xi_x, (1.0 + std::abs(d.b(i))) / (1.0 + norm_a));
    xi_x = std::max(xi_x, std::sqrt(static_cast<double>(ntot)));

    std::vector<Matrix> X(nb), Z(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        X[j] = xi_x * Matrix::Identity(d.C[j].rows(), d.C[j].rows());
        Z[j] = xi_z * Matrix::Identity(d.C[j].rows(), d.C[j].rows());
    }
    Vector& y = res.y;

    auto a_op = [&](const std::vector<Matrix>& M) {
        Vector out = Vector::Zero(d.k);
        for (std::size_t j = 0; j < nb; ++j) {
            for (const auto& [i, a] : d.A[j]) out(i) += frob_dot(a, M[j]);
        }
        return out;
    };
    auto a_adj = [&](const Vector& v, std::size_t j) {
        Matrix out = Matrix::Zero(d.C[j].rows(), d.C[j].cols());
        for (const auto& [i, a] : d.A[j]) out += v(i) * a;
        return out;
    };

    // Dual-accurate iterate with a stalled primal residual; used when the
    // iteration cannot make further progress.
    std::optional<IpmResult> stalled;
    double stalled_score = 0.0;
    int stalled_at = -1;
    auto fail = [&](const std::string& msg) {
        if (stalled) {
            return *stalled;
        }
        res.status = SolveStatus::numerical_failure;
        res.message = msg;
        return res;
    };

    for (int it = 0; it < s.max_iters; ++it) {
        res.iterations = it;
        std::vector<Matrix> Rd(nb), Zinv(nb);
        double mu = 0.0, rd_norm = 0.0, pobj = 0.0, x_norm = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
            Rd[j] = d.C[j] - Z[j] - a_adj(y, j);
            rd_norm += Rd[j].squaredNorm();
            mu += frob_dot(X[j], Z[j]);
            pobj += frob_dot(d.C[j], X[j]);
            x_norm = std::max(x_norm, X[j].norm());
            Eigen::LLT<Matrix> llt(Z[j]);
            if (llt.info() != Eigen::Success) return fail("slack lost definiteness");
            Zinv[j] = llt.solve(Matrix::Identity(Z[j].rows(), Z[j].cols()));
        }
        rd_norm = std::sqrt(rd_norm);
        mu /= static_cast<double>(ntot);
        const Vector Rp = d.b - a_op(X);
        const double dobj = d.b.dot(y);
        res.pobj = pobj;
        res.dobj = dobj;

        const double pinf = Rp.norm() / (1.0 + norm_b);
        const double dinf = rd_norm / (1.0 + norm_c);
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        if (std::getenv("DDMPC_IPM_TRACE")) std::fprintf(stderr, "it %d pinf %.2e dinf %.2e gap %.2e mu %.2e pobj %.6g dobj %.6g ymax %.2e\n", it, pinf, dinf, gap, mu, pobj, dobj, y.cwiseAbs().maxCoeff());
        if (pinf < s.feas_tol && dinf < s.feas_tol && gap < s.gap_tol) {
            res.status = SolveStatus::optimal;
            return res;
        }
        if (dinf < s.feas_tol && gap < std::sqrt(s.gap_tol) && pinf < std::sqrt(s.feas_tol)) {
            const double score = std::max(pinf / s.feas_tol, gap / s.gap_tol);
            if (!stalled || score < stalled_score) {
                stalled = res;
                stalled->status = SolveStatus::optimal;
                char buf[96];
                std::snprintf(buf, sizeof buf, "reduced accuracy: primal residual %.1e, gap %.1e", pinf, gap);
                stalled->message = buf;
                stalled_score = score;
            }
            if (stalled_at < 0) stalled_at = it;
            if (it - stalled_at >= 8) return fail("");
        }
        if (y.norm() > 1e12 || x_norm > 1e12 * xi_x) {
            res.diverged = true;
            res.status = SolveStatus::numerical_failure;
            res.message = "iterates diverged";
            return res;
        }

        // Schur complement matrix M_il = tr(A_i X A_l Z^{-1}).
        Matrix M = Matrix::Zero(d.k, d.k);
        for (std::size_t j = 0; j < nb; ++j) {
            for (const auto& [l, al] : d.A[j]) {
                const Matrix G = X[j] * al * Zinv[j];
                for (const auto& [i, ai] : d.A[j]) M(i, l) += frob_dot(ai, G.transpose());
            }
        }
        M = 0.5 * (M + M.transpose());
        for (int i = 0; i < d.k; ++i) {
            if (!used[static_cast<std::size_t>(i)]) M(i, i) = 1.0;
        }
        Eigen::LDLT<Matrix> ldlt(M);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            const double reg = 1e-14 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
            M.diagonal().array() += reg;
            ldlt.compute(M);
            if (ldlt.info() != Eigen::Success) return fail("Schur matrix factorization failed");
        }

        // One Newton direction for a given complementarity target.
        auto direction = [&](double sigma_mu, const std::vector<Matrix>* dXa, const std::vector<Matrix>* dZa,
                             std::vector<Matrix>& dX, std::vector<Matrix>& dZ, Vector& dy) {
            std::vector<Matrix> G(nb), XRdZ(nb);
            for (std::size_t j = 0; j < nb; ++j) {
                G[j] = sigma_mu * Zinv[j] - X[j];
                if (dXa) G[j] -= (*dXa)[j] * (*dZa)[j] * Zinv[j];
                XRdZ[j] = X[j] * Rd[j] * Zinv[j];
            }
            const Vector rhs = Rp - a_op(G) + a_op(XRdZ);
            dy = ldlt.solve(rhs);
            for (int r = 0; r < 3; ++r) {
                const Vector res_s = rhs - M * dy;
                if (res_s.norm() <= 1e-15 * rhs.norm()) break;
                dy += ldlt.solve(res_s);
            }
            dX.resize(nb);
            dZ.resize(nb);
            for (std::size_t j = 0; j < nb; ++j) {
                dZ[j] = Rd[j] - a_adj(dy, j);
                Matrix dx = G[j] - X[j] * dZ[j] * Zinv[j];
                dX[j] = 0.5 * (dx + dx.transpose());
            }
        };
        auto step_lengths = [&](const std::vector<Matrix>& dX, const std::vector<Matrix>& dZ, double t) {
            double ap = std::numeric_limits<double>::infinity(), ad = ap;
            for (std::size_t j = 0; j < nb; ++j) {
                ap = std::min(ap, max_step(X[j], dX[j]));
                ad = std::min(ad, max_step(Z[j], dZ[j]));
            }
            return std::pair{std::min(1.0, t * ap), std::min(1.0, t * ad)};
        };

        std::vector<Matrix> dXa, dZa;
        Vector dya;
        direction(0.0, nullptr, nullptr, dXa, dZa, dya);
        const auto [apa, ada] = step_lengths(dXa, dZa, 1.0);
        double mu_aff = 0.0;
        for (std::size_t j = 0; j < nb; ++j) mu_aff += frob_dot(X[j] + apa * dXa[j], Z[j] + ada * dZa[j]);
        mu_aff /= static_cast<double>(ntot);
        const double sigma = mu > 0.0 ? std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0) : 0.0;

        std::vector<Matrix> dX, dZ;
        Vector dy;
        direction(sigma * mu, &dXa, &dZa, dX, dZ, dy);
        if (!dy.allFinite()) return fail("non-finite search direction");
        const double tau = 0.9 + 0.09 * std::min(apa, ada);
        auto [ap, ad] = step_lengths(dX, dZ, tau);
        // Back off until both updated iterates factor.
        std::vector<Matrix> Xn(nb), Zn(nb);
        for (int tries = 0;; ++tries) {
            bool ok = true;
            for (std::size_t j = 0; j < nb && ok; ++j) {
                Xn[j] = X[j] + ap * dX[j];
                Xn[j] = 0.5 * (Xn[j] + Xn[j].transpose());
                Zn[j] = Z[j] + ad * dZ[j];
                Zn[j] = 0.5 * (Zn[j] + Zn[j].transpose());
                ok = Eigen::LLT<Matrix>(Xn[j]).info() == Eigen::Success && Eigen::LLT<Matrix>(Zn[j]).info() == Eigen::Success;
            }
            if (ok) break;
            if (tries == 30) return fail("slack lost definiteness");
            ap *= 0.5;
            ad *= 0.5;
        }
        X.swap(Xn);
        Z.swap(Zn);
        y += ad * dy;
        if (ap < 1e-12 && ad < 1e-12) return fail("step length collapsed");
    }
    if (stalled) return fail("");
    res.iterations = s.max_iters;
    res.status = SolveStatus::max_iters;
    res.message = "iteration limit reached";
    return res;
}

/// Phase-1 program: minimize s with F_j(y) + s I >= 0, bounds relaxed by s,
/// |y_i| <= R and s >= -1. Always strictly feasible and bounded.
inline ConicProgram phase1_program(const ConicProgram& cp, double radius) {
    ConicProgram p1;
    p1.num_vars = cp.num_vars + 1;
    const int s_idx = cp.num_vars;
    p1.objective = Vector::Zero(p1.num_vars);
    p1.objective(s_idx) = 1.0;
    p1.lower_bounds = Vector::Constant(p1.num_vars, -std::numeric_limits<double>::infinity());
    p1.lower_bounds(s_idx) = -1.0;
    p1.var_names = cp.var_names;
    p1.var_names.push_back("phase1_s");
    for (const auto& b : cp.psd_blocks) {
        PsdBlock nb = b;
        nb.coeffs.emplace_back(s_idx, Matrix::Identity(b.side(), b.side()));
        p1.psd_blocks.push_back(std::move(nb));
    }
    for (int i = 0; i < cp.num_vars; ++i) {
        if (std::isfinite(cp.lower_bounds(i))) {
            p1.psd_blocks.push_back({"lb_" + std::to_string(i), Matrix::Constant(1, 1, -cp.lower_bounds(i)),
                                     {{i, Matrix::Ones(1, 1)}, {s_idx, Matrix::Ones(1, 1)}}});
        }
        if (cp.upper_bounds.size() > 0 && std::isfinite(cp.upper_bounds(i))) {
            p1.psd_blocks.push_back({"ub_" + std::to_string(i), Matrix::Constant(1, 1, cp.upper_bounds(i)),
                                     {{i, -Matrix::Ones(1, 1)}, {s_idx, Matrix::Ones(1, 1)}}});
        }
        p1.psd_blocks.push_back({"box+_" + std::to_string(i), Matrix::Constant(1, 1, radius), {{i, -Matrix::Ones(1, 1)}}});
        p1.psd_blocks.push_back({"box-_" + std::to_string(i), Matrix::Constant(1, 1, radius), {{i, Matrix::Ones(1, 1)}}});
    }
    return p1;
}

inline std::vector<BlockResidual> block_residuals(const ConicProgram& cp, const Vector& y) {
    std::vector<BlockResidual> out;
    for (const auto& b : cp.psd_blocks) out.push_back({b.name, min_eigenvalue(SymMatrix::symmetrized(b.evaluate(y)))});
    for (int i = 0; i < cp.num_vars; ++i) {
        if (std::isfinite(cp.lower_bounds(i))) out.push_back({"lb_" + cp.var_names.at(static_cast<std::size_t>(i)), y(i) - cp.lower_bounds(i)});
        if (cp.upper_bounds.size() > 0 && std::isfinite(cp.upper_bounds(i))) out.push_back({"ub_" + cp.var_names.at(static_cast<std::size_t>(i)), cp.upper_bounds(i) - y(i)});
    }
    return out;
}

}  // namespace detail

/// Solves the conic program. Never throws on solver trouble; the outcome is
/// reported in Solution::status.
inline Solution solve(const ConicProgram& cp, const SolverSettings& s) {
    cp.validate();
    s.validate();
    if (cp.var_names.size() != static_cast<std::size_t>(cp.num_vars)) {
        ConicProgram named = cp;
        named.var_names.clear();
        for (int i = 0; i < cp.num_vars; ++i) named.var_names.push_back("y" + std::to_string(i));
        return solve(named, s);
    }

    Solution sol;
    const detail::SdpData data = detail::to_sdp_data(cp);
    detail::IpmResult r = detail::ipm(data, s);
    r.y = data.unscale(r.y);
    sol.iterations = r.iterations;
    sol.point = r.y;
    sol.message = r.message;

    if (r.status == SolveStatus::optimal) {
        sol.residuals = detail::block_residuals(cp, r.y);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& br : sol.residuals) worst = std::min(worst, br.min_eig);
        sol.objective_value = cp.objective.dot(r.y);
        sol.gap = std::abs(r.pobj - r.dobj);
        if (worst >= -s.feas_tol) {
            sol.status = SolveStatus::optimal;
            return sol;
        }
        sol.message = "converged point violates a block by " + std::to_string(-worst);
    }
    if (r.status == SolveStatus::unbounded) {
        sol.status = SolveStatus::unbounded;
        return sol;
    }

    // Classify the failure with the phase-1 program.
    const ConicProgram p1 = detail::phase1_program(cp, s.box_radius);
    const detail::SdpData data1 = detail::to_sdp_data(p1);
    const detail::IpmResult r1 = detail::ipm(data1, s);
    if (r1.status == SolveStatus::optimal) {
        const double s_star = data1.unscale(r1.y)(cp.num_vars);
        sol.phase1_value = s_star;
        char s_txt[32];
        std::snprintf(s_txt, sizeof s_txt, "%.3g", s_star);
        if (s_star > 10.0 * s.feas_tol) {
            sol.status = SolveStatus::infeasible;
            sol.message = "phase-1 minimum " + std::string(s_txt) + " > 0: no feasible point";
            return sol;
        }
        if (r.diverged) {
            bool bounded_below = true;
            for (int i = 0; i < cp.num_vars; ++i) {
                const double c = cp.objective(i);
                if (c > 0.0 && !std::isfinite(cp.lower_bounds(i))) bounded_below = false;
                if (c < 0.0 && (cp.upper_bounds.size() == 0 || !std::isfinite(cp.upper_bounds(i)))) bounded_below = false;
            }
            if (bounded_below) {
                sol.status = SolveStatus::numerical_failure;
                sol.message = "phase-1 minimum " + std::string(s_txt) +
                              " within tolerance but iterates diverged: feasible set is empty or has no interior";
            } else {
                sol.status = SolveStatus::unbounded;
                sol.message = "feasible but objective diverged";
            }
            return sol;
        }
    }
    sol.status = r.status == SolveStatus::optimal ? SolveStatus::numerical_failure : r.status;
    if (sol.status == SolveStatus::optimal) sol.status = SolveStatus::numerical_failure;
    return sol;
}

/// Lowers and solves an LmiProblem, returning the solution and the decision
/// point (when available).
inline std::pair<Solution, std::optional<DecisionPoint>> solve(const LmiProblem& p, const SolverSettings& s) {
    Solution sol = solve(lower(p, s), s);
    std::optional<DecisionPoint> dp;
    if (sol.status == SolveStatus::optimal) dp = p.vars.from_coordinates(sol.point);
    return {std::move(sol), std::move(dp)};
}

}  // namespace ddmpc
