#pragma once

// Affine-in-decision-variable PSD block constraints for data-driven
// state-feedback MPC synthesis (nominal, polytopic, Lur'e), plus the
// standalone Finsler-direction and ellipsoid-containment checkers.

#include "ddmpc/datalab.hpp"
#include "ddmpc/matcore.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ddmpc {

// ---------------------------------------------------------------------------
// Weights and constraint rows

struct Weights {
    Matrix Q, R;
    Matrix Q_half, R_half;
    Matrix Q_hat;  // (n+m) x n = [Q^{1/2}; 0]
    Matrix R_hat;  // (n+m) x m = [0; R^{1/2}]

    Eigen::Index n() const { return Q.rows(); }
    Eigen::Index m() const { return R.rows(); }
};

inline Weights make_weights(const Matrix& Q, const Matrix& R) {
    Weights w;
    w.Q = SymMatrix(Q).matrix();
    w.R = SymMatrix(R).matrix();
    w.Q_half = sqrt_pd(w.Q);
    w.R_half = sqrt_pd(w.R);
    const auto n = w.Q.rows();
    const auto m = w.R.rows();
    w.Q_hat = Matrix::Zero(n + m, n);
    w.Q_hat.topRows(n) = w.Q_half;
    w.R_hat = Matrix::Zero(n + m, m);
    w.R_hat.bottomRows(m) = w.R_half;
    return w;
}

/// One row of c x + d u <= 1.
struct ConstraintRow {
    Eigen::RowVectorXd c;
    Eigen::RowVectorXd d;
};

struct ConstraintRows {
    Eigen::Index n = 0, m = 0;
    std::vector<ConstraintRow> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

/// Combines state rows (c_i x <= 1) and input rows (d_i u <= 1) into the
/// joint form c_i x + d_i u <= 1, padding the missing side with zeros.
inline ConstraintRows make_constraint_rows(const Matrix& state_rows, const Matrix& input_rows, Eigen::Index n,
                                           Eigen::Index m) {
    if (state_rows.size() > 0 && state_rows.cols() != n) throw DimensionError("make_constraint_rows: state rows need n columns");
    if (input_rows.size() > 0 && input_rows.cols() != m) throw DimensionError("make_constraint_rows: input rows need m columns");
    if (!state_rows.allFinite() || !input_rows.allFinite()) throw DimensionError("make_constraint_rows: rows must be finite");
    ConstraintRows out;
    out.n = n;
    out.m = m;
    for (Eigen::Index i = 0; i < state_rows.rows(); ++i) {
        out.rows.push_back({state_rows.row(i), Eigen::RowVectorXd::Zero(m)});
    }
    for (Eigen::Index i = 0; i < input_rows.rows(); ++i) {
        out.rows.push_back({Eigen::RowVectorXd::Zero(n), input_rows.row(i)});
    }
    return out;
}

/// One coordinate bound lo <= v(index) <= hi.
struct BoxBound {
    Eigen::Index index;
    double lo;
    double hi;
};

/// Converts box bounds to rows of the "<= 1" form by dividing each face by
/// its bound. Requires lo < 0 < hi and finite bounds.
inline Matrix box_rows(const std::vector<BoxBound>& bounds, Eigen::Index dim) {
    Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(2 * bounds.size()), dim);
    Eigen::Index r = 0;
    for (const auto& b : bounds) {
        if (b.index < 0 || b.index >= dim) throw DimensionError("box_rows: index out of range");
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < 0.0) || !(b.hi > 0.0)) {
            throw DimensionError("box_rows: bounds must be finite with lo < 0 < hi (got [" + std::to_string(b.lo) +
                                 ", " + std::to_string(b.hi) + "])");
        }
        rows(r++, b.index) = 1.0 / b.hi;
        rows(r++, b.index) = 1.0 / b.lo;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Decision variables

struct DecisionPoint {
    Matrix N;        // n x n symmetric
    Matrix L;        // m x n
    double alpha = 1.0;
    double eta = 1.0;
    double epsilon = 1.0;
    std::vector<double> vertex_epsilon;  // only with per-vertex epsilon
};

/// Enumerates the scalar decision coordinates.
struct VarLayout {
    Eigen::Index n = 0, m = 0;
    std::size_t vertex_eps = 0;  // 0 = shared epsilon
    std::vector<std::string> names;

    static VarLayout make(Eigen::Index n, Eigen::Index m, std::size_t vertex_eps = 0) {
        VarLayout v;
        v.n = n;
        v.m = m;
        v.vertex_eps = vertex_eps;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) v.names.push_back("N(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) v.names.push_back("L(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        v.names.push_back("alpha");
        v.names.push_back("eta");
        if (vertex_eps == 0) {
            v.names.push_back("epsilon");
        } else {
            for (std::size_t j = 0; j < vertex_eps; ++j) v.names.push_back("epsilon_" + std::to_string(j));
        }
        return v;
    }

    std::size_t size() const { return names.size(); }
    int n_index(Eigen::Index i, Eigen::Index j) const {
        if (i > j) std::swap(i, j);
        // row-major upper triangle
        return static_cast<int>(i * n - i * (i - 1) / 2 + (j - i));
    }
    int l_index(Eigen::Index i, Eigen::Index j) const { return static_cast<int>(n * (n + 1) / 2 + i * n + j); }
    int alpha_index() const { return static_cast<int>(n * (n + 1) / 2 + m * n); }
    int eta_index() const { return alpha_index() + 1; }
    int epsilon_index(std::size_t vertex = 0) const {
        return eta_index() + 1 + (vertex_eps == 0 ? 0 : static_cast<int>(vertex));
    }

    Vector to_coordinates(const DecisionPoint& dp) const {
        if (dp.N.rows() != n || dp.N.cols() != n || dp.L.rows() != m || dp.L.cols() != n) {
            throw DimensionError("DecisionPoint shape does not match the variable layout");
        }
        Vector t(static_cast<Eigen::Index>(size()));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) t(n_index(i, j)) = 0.5 * (dp.N(i, j) + dp.N(j, i));
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) t(l_index(i, j)) = dp.L(i, j);
        }
        t(alpha_index()) = dp.alpha;
        t(eta_index()) = dp.eta;
        if (vertex_eps == 0) {
            t(epsilon_index()) = dp.epsilon;
        } else {
            for (std::size_t j = 0; j < vertex_eps; ++j) {
                t(epsilon_index(j)) = dp.vertex_epsilon.size() == vertex_eps ? dp.vertex_epsilon[j] : dp.epsilon;
            }
        }
        return t;
    }

    DecisionPoint from_coordinates(const Vector& t) const {
        if (t.size() != static_cast<Eigen::Index>(size())) throw DimensionError("coordinate vector has wrong length");
        DecisionPoint dp;
        dp.N.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) dp.N(i, j) = t(n_index(i, j));
        }
        dp.L.resize(m, n);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) dp.L(i, j) = t(l_index(i, j));
        }
        dp.alpha = t(alpha_index());
        dp.eta = t(eta_index());
        if (vertex_eps == 0) {
            dp.epsilon = t(epsilon_index());
        } else {
            for (std::size_t j = 0; j < vertex_eps; ++j) dp.vertex_epsilon.push_back(t(epsilon_index(j)));
            dp.epsilon = dp.vertex_epsilon.front();
        }
        return dp;
    }
};

// ---------------------------------------------------------------------------
// Affine matrix expressions: constant + sum_k theta_k * coeff_k

class AffineMatrix {
public:
    AffineMatrix() = default;
    AffineMatrix(Eigen::Index rows, Eigen::Index cols) : constant_(Matrix::Zero(rows, cols)) {}

    static AffineMatrix constant(const Matrix& c) {
        AffineMatrix a;
        a.constant_ = c;
        return a;
    }
    static AffineMatrix variable(int index, const Matrix& coeff) {
        AffineMatrix a(coeff.rows(), coeff.cols());
        a.coeffs_[index] = coeff;
        return a;
    }

    Eigen::Index rows() const { return constant_.rows(); }
    Eigen::Index cols() const { return constant_.cols(); }
    const Matrix& constant_part() const { return constant_; }
    const std::map<int, Matrix>& coefficients() const { return coeffs_; }

    AffineMatrix& operator+=(const AffineMatrix& o) {
        check_same(o);
        constant_ += o.constant_;
        for (const auto& [k, c] : o.coeffs_) {
            auto it = coeffs_.find(k);
            if (it == coeffs_.end()) {
                coeffs_.emplace(k, c);
            } else {
                it->second += c;
            }
        }
        return *this;
    }
    friend AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
    friend AffineMatrix operator-(const AffineMatrix& a) { return a.scaled(-1.0); }
    friend AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a += b.scaled(-1.0); }
    friend AffineMatrix operator*(double s, const AffineMatrix& a) { return a.scaled(s); }

    friend AffineMatrix operator*(const Matrix& left, const AffineMatrix& a) {
        if (left.cols() != a.rows()) throw DimensionError("AffineMatrix: left product shape mismatch");
        AffineMatrix out = constant(left * a.constant_);
        for (const auto& [k, c] : a.coeffs_) out.coeffs_[k] = left * c;
        return out;
    }
    friend AffineMatrix operator*(const AffineMatrix& a, const Matrix& right) {
        if (a.cols() != right.rows()) throw DimensionError("AffineMatrix: right product shape mismatch");
        AffineMatrix out = constant(a.constant_ * right);
        for (const auto& [k, c] : a.coeffs_) out.coeffs_[k] = c * right;
        return out;
    }

    AffineMatrix transpose() const {
        AffineMatrix out = constant(constant_.transpose());
        for (const auto& [k, c] : coeffs_) out.coeffs_[k] = c.transpose();
        return out;
    }

    Matrix evaluate(const Vector& theta) const {
        Matrix out = constant_;
        for (const auto& [k, c] : coeffs_) out += theta(k) * c;
        return out;
    }

private:
    AffineMatrix scaled(double s) const {
        AffineMatrix out = constant(s * constant_);
        for (const auto& [k, c] : coeffs_) out.coeffs_[k] = s * c;
        return out;
    }
    void check_same(const AffineMatrix& o) const {
        if (o.rows() != rows() || o.cols() != cols()) {
            throw DimensionError("AffineMatrix: sum of " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                                 " and " + std::to_string(o.rows()) + "x" + std::to_string(o.cols()));
        }
    }

    Matrix constant_;
    std::map<int, Matrix> coeffs_;
};

using AffineGrid = std::vector<std::vector<std::optional<AffineMatrix>>>;

/// Named PSD constraint constant + sum_k theta_k coeff_k >= margin * I.
struct LmiBlock {
    std::string name;
    Matrix constant;
    std::vector<std::pair<int, Matrix>> coeffs;  // sorted by coordinate
    double margin = 0.0;

    Eigen::Index side() const { return constant.rows(); }

    SymMatrix evaluate(const Vector& theta) const {
        Matrix out = constant;
        for (const auto& [k, c] : coeffs) out += theta(k) * c;
        return SymMatrix::symmetrized(out);
    }
};

/// Assembles an affine block grid coordinate by coordinate through the
/// numeric symmetric assembler, so every coefficient inherits its checks.
inline LmiBlock assemble_affine(std::string name, const std::vector<Eigen::Index>& sizes, const AffineGrid& grid) {
    const auto layout = BlockLayout::symmetric(sizes);
    std::vector<int> vars;
    for (const auto& row : grid) {
        for (const auto& cell : row) {
            if (!cell) continue;
            for (const auto& [k, c] : cell->coefficients()) vars.push_back(k);
        }
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    auto extract = [&](std::optional<int> var) {
        BlockGrid g(grid.size(), std::vector<BlockCell>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i].size() != grid.size()) throw DimensionError("assemble_affine: ragged grid");
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const auto& cell = grid[i][j];
                if (!cell) continue;
                if (!var) {
                    g[i][j] = cell->constant_part();
                } else {
                    auto it = cell->coefficients().find(*var);
                    if (it != cell->coefficients().end()) g[i][j] = it->second;
                    else g[i][j] = Matrix::Zero(cell->rows(), cell->cols());
                }
            }
        }
        return assemble_blocks(layout, g).matrix();
    };

    LmiBlock b;
    b.name = std::move(name);
    b.constant = extract(std::nullopt);
    for (int k : vars) {
        Matrix c = extract(k);
        if (c.cwiseAbs().maxCoeff() > 0.0) b.coeffs.emplace_back(k, std::move(c));
    }
    return b;
}

/// Adds theta_var * extra to a block (used for the data outer-product term).
inline void add_coefficient(LmiBlock& b, int var, const Matrix& extra) {
    if (extra.rows() != b.side() || extra.cols() != b.side()) throw DimensionError("add_coefficient: shape");
    for (auto& [k, c] : b.coeffs) {
        if (k == var) {
            c += extra;
            return;
        }
    }
    b.coeffs.emplace_back(var, extra);
    std::sort(b.coeffs.begin(), b.coeffs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
}

// ---------------------------------------------------------------------------
// Problems

enum class Mode { nominal, polytopic, lure };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::nominal: return "nominal";
        case Mode::polytopic: return "polytopic";
        case Mode::lure: return "lure";
    }
    return "unknown";
}

inline Mode mode_from_string(const std::string& s) {
    if (s == "nominal") return Mode::nominal;
    if (s == "polytopic") return Mode::polytopic;
    if (s == "lure") return Mode::lure;
    throw std::invalid_argument("unknown mode '" + s + "' (expected nominal|polytopic|lure)");
}

struct ProblemDims {
    Eigen::Index n = 0, m = 0, p = 0;
    std::vector<Eigen::Index> T;  // one per dataset
    std::size_t r = 0;
    std::size_t zeta = 1;
};

struct LmiOptions {
    double delta = 1e-6;              // strictness margin scale
    bool per_vertex_epsilon = false;  // polytopic only
};

struct LmiProblem {
    Mode mode = Mode::nominal;
    ProblemDims dims;
    VarLayout vars;
    std::vector<LmiBlock> constraints;
    double delta = 1e-6;

    int objective_index() const { return vars.alpha_index(); }

    const LmiBlock& block(const std::string& name) const {
        for (const auto& b : constraints) {
            if (b.name == name) return b;
        }
        throw std::out_of_range("LmiProblem: no block named '" + name + "'");
    }
};

namespace detail {

struct Symbols {
    AffineMatrix N, L, alpha_n, alpha_nm, alpha_p, eta_n;
    std::vector<AffineMatrix> dummy;
};

inline AffineMatrix n_expr(const VarLayout& v) {
    AffineMatrix N(v.n, v.n);
    for (Eigen::Index i = 0; i < v.n; ++i) {
        for (Eigen::Index j = i; j < v.n; ++j) {
            Matrix e = Matrix::Zero(v.n, v.n);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            N += AffineMatrix::variable(v.n_index(i, j), e);
        }
    }
    return N;
}

inline AffineMatrix l_expr(const VarLayout& v) {
    AffineMatrix L(v.m, v.n);
    for (Eigen::Index i = 0; i < v.m; ++i) {
        for (Eigen::Index j = 0; j < v.n; ++j) {
            Matrix e = Matrix::Zero(v.m, v.n);
            e(i, j) = 1.0;
            L += AffineMatrix::variable(v.l_index(i, j), e);
        }
    }
    return L;
}

inline AffineMatrix scaled_identity(int var, Eigen::Index side) {
    return AffineMatrix::variable(var, Matrix::Identity(side, side));
}

inline AffineMatrix cst(const Matrix& m) { return AffineMatrix::constant(m); }

inline double block_margin(const LmiBlock& b, double delta) {
    return delta * std::max(1.0, max_abs(b.constant));
}

inline void check_common(const Weights& w, const ConstraintRows& rows, const Vector& x0, Eigen::Index n,
                         Eigen::Index m) {
    if (w.n() != n || w.m() != m) throw DimensionError("weights do not match the data dimensions");
    if (x0.size() != n) throw DimensionError("x0 has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
    if (!rows.empty() && (rows.n != n || rows.m != m)) throw DimensionError("constraint rows do not match the data dimensions");
}

/// Shared blocks: ellip, stab2 (nominal form), con_i.
inline LmiBlock ellip_block(const AffineMatrix& N, const Vector& x0) {
    const Eigen::Index n = x0.size();
    AffineGrid g(2, std::vector<std::optional<AffineMatrix>>(2));
    g[0][0] = cst(Matrix::Ones(1, 1));
    g[0][1] = cst(x0.transpose());
    g[1][0] = cst(x0);
    g[1][1] = N;
    return assemble_affine("ellip", {1, n}, g);
}

inline std::vector<LmiBlock> constraint_blocks(const AffineMatrix& N, const AffineMatrix& L,
                                               const ConstraintRows& rows) {
    std::vector<LmiBlock> out;
    const Eigen::Index n = N.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows.rows[i];
        AffineMatrix w = Matrix(row.d) * L + Matrix(row.c) * N;  // 1 x n
        AffineGrid g(2, std::vector<std::optional<AffineMatrix>>(2));
        g[0][0] = cst(Matrix::Ones(1, 1));
        g[0][1] = w;
        g[1][0] = w.transpose();
        g[1][1] = N;
        out.push_back(assemble_affine("con_" + std::to_string(i), {1, n}, g));
    }
    return out;
}

/// Pads the data vector with zero rows to `side` and returns its outer product.
inline Matrix padded_outer(const Matrix& data, Eigen::Index side) {
    Matrix v = Matrix::Zero(side, data.cols());
    v.topRows(data.rows()) = data;
    return v * v.transpose();
}

}  // namespace detail

/// Psi = Q_hat N + R_hat L
inline Matrix psi(const Matrix& N, const Matrix& L, const Weights& w) {
    if (N.rows() != w.n() || N.cols() != w.n() || L.rows() != w.m() || L.cols() != w.n()) {
        throw DimensionError("psi: N must be nxn and L mxn");
    }
    return w.Q_hat * N + w.R_hat * L;
}

namespace detail {

/// Nominal/polytopic data block: grid rows (n, n, m, n, n+m).
inline LmiBlock nominal_stab_block(const std::string& name, const VarLayout& v, const AffineMatrix& N,
                                   const AffineMatrix& L, const AffineMatrix& Psi, const Dataset& d,
                                   int eps_index) {
    const Eigen::Index n = v.n, m = v.m;
    AffineGrid g(5, std::vector<std::optional<AffineMatrix>>(5));
    g[0][0] = N - scaled_identity(v.eta_index(), n);
    g[1][3] = N;
    g[2][3] = L;
    g[3][1] = N;
    g[3][2] = L.transpose();
    g[3][3] = N;
    g[3][4] = Psi.transpose();
    g[4][3] = Psi;
    g[4][4] = scaled_identity(v.alpha_index(), n + m);
    LmiBlock b = assemble_affine(name, {n, n, m, n, n + m}, g);
    add_coefficient(b, eps_index, padded_outer(data_vector(d, false), b.side()));
    return b;
}

inline LmiBlock nominal_stab2_block(const VarLayout& v, const AffineMatrix& N, const AffineMatrix& Psi) {
    AffineGrid g(2, std::vector<std::optional<AffineMatrix>>(2));
    g[0][0] = N;
    g[0][1] = Psi.transpose();
    g[1][0] = Psi;
    g[1][1] = scaled_identity(v.alpha_index(), v.n + v.m);
    return assemble_affine("stab2", {v.n, v.n + v.m}, g);
}

inline void finalize(LmiProblem& p, double delta) {
    p.delta = delta;
    for (auto& b : p.constraints) b.margin = block_margin(b, delta);
}

}  // namespace detail

/// Nominal problem: ellip, stab, stab2, con_i.
inline LmiProblem build_nominal(const Dataset& d, const Weights& w, const ConstraintRows& rows, const Vector& x0,
                                const LmiOptions& opt = {}) {
    shift_split(d);
    const Eigen::Index n = d.n(), m = d.m();
    detail::check_common(w, rows, x0, n, m);

    LmiProblem p;
    p.mode = Mode::nominal;
    p.dims = {n, m, 0, {d.T()}, rows.size(), 1};
    p.vars = VarLayout::make(n, m);
    const AffineMatrix N = detail::n_expr(p.vars);
    const AffineMatrix L = detail::l_expr(p.vars);
    const AffineMatrix Psi = w.Q_hat * N + w.R_hat * L;

    p.constraints.push_back(detail::ellip_block(N, x0));
    p.constraints.push_back(detail::nominal_stab_block("stab", p.vars, N, L, Psi, d, p.vars.epsilon_index()));
    p.constraints.push_back(detail::nominal_stab2_block(p.vars, N, Psi));
    for (auto& b : detail::constraint_blocks(N, L, rows)) p.constraints.push_back(std::move(b));
    detail::finalize(p, opt.delta);
    return p;
}

/// Polytopic problem: one data block per vertex dataset, shared variables.
inline LmiProblem build_polytopic(const std::vector<Dataset>& datasets, const Weights& w, const ConstraintRows& rows,
                                  const Vector& x0, const LmiOptions& opt = {}) {
    if (datasets.empty()) throw DimensionError("build_polytopic: need at least one vertex dataset");
    const Eigen::Index n = datasets.front().n(), m = datasets.front().m();
    for (const auto& d : datasets) {
        shift_split(d);
        if (d.n() != n || d.m() != m) throw DimensionError("build_polytopic: vertex datasets differ in (n, m)");
    }
    detail::check_common(w, rows, x0, n, m);

    LmiProblem p;
    p.mode = datasets.size() == 1 ? Mode::nominal : Mode::polytopic;
    p.dims = {n, m, 0, {}, rows.size(), datasets.size()};
    for (const auto& d : datasets) p.dims.T.push_back(d.T());
    p.vars = VarLayout::make(n, m, opt.per_vertex_epsilon ? datasets.size() : 0);
    const AffineMatrix N = detail::n_expr(p.vars);
    const AffineMatrix L = detail::l_expr(p.vars);
    const AffineMatrix Psi = w.Q_hat * N + w.R_hat * L;

    p.constraints.push_back(detail::ellip_block(N, x0));
    for (std::size_t j = 0; j < datasets.size(); ++j) {
        const std::string name = datasets.size() == 1 ? "stab" : "stab_" + std::to_string(j);
        p.constraints.push_back(
            detail::nominal_stab_block(name, p.vars, N, L, Psi, datasets[j], p.vars.epsilon_index(j)));
    }
    p.constraints.push_back(detail::nominal_stab2_block(p.vars, N, Psi));
    for (auto& b : detail::constraint_blocks(N, L, rows)) p.constraints.push_back(std::move(b));
    detail::finalize(p, opt.delta);
    return p;
}

/// Lur'e problem: data block rows (n, n, m, p, p, n, n+m) with the sector
/// coupling -1/2 beta H N, and the 3-block stab2.
inline LmiProblem build_lure(const Dataset& d, const Weights& w, const ConstraintRows& rows, const Vector& x0,
                             const Matrix& H, const Matrix& beta, const LmiOptions& opt = {}) {
    shift_split(d);
    if (!d.W_minus) throw DimensionError("build_lure: dataset has no W_minus");
    const Eigen::Index n = d.n(), m = d.m(), pw = d.p();
    detail::check_common(w, rows, x0, n, m);
    if (H.rows() != pw || H.cols() != n) throw DimensionError("build_lure: H must be pxn, got " + shape_str(H));
    if (beta.rows() != pw || beta.cols() != pw) throw DimensionError("build_lure: beta must be pxp, got " + shape_str(beta));

    LmiProblem p;
    p.mode = Mode::lure;
    p.dims = {n, m, pw, {d.T()}, rows.size(), 1};
    p.vars = VarLayout::make(n, m);
    const VarLayout& v = p.vars;
    const AffineMatrix N = detail::n_expr(v);
    const AffineMatrix L = detail::l_expr(v);
    const AffineMatrix Psi = w.Q_hat * N + w.R_hat * L;
    const AffineMatrix sector = (-0.5 * beta * H) * N;  // p x n
    const auto alpha_p = detail::scaled_identity(v.alpha_index(), pw);

    AffineGrid g(7, std::vector<std::optional<AffineMatrix>>(7));
    g[0][0] = N - detail::scaled_identity(v.eta_index(), n);
    g[1][5] = N;
    g[2][5] = L;
    g[3][4] = alpha_p;
    g[4][3] = alpha_p;
    g[4][4] = alpha_p;
    g[4][5] = sector;
    g[5][1] = N;
    g[5][2] = L.transpose();
    g[5][4] = sector.transpose();
    g[5][5] = N;
    g[5][6] = Psi.transpose();
    g[6][5] = Psi;
    g[6][6] = detail::scaled_identity(v.alpha_index(), n + m);
    LmiBlock stab = assemble_affine("stab", {n, n, m, pw, pw, n, n + m}, g);
    add_coefficient(stab, v.epsilon_index(), detail::padded_outer(data_vector(d, true), stab.side()));

    AffineGrid g2(3, std::vector<std::optional<AffineMatrix>>(3));
    g2[0][0] = N;
    g2[0][1] = sector.transpose();
    g2[0][2] = Psi.transpose();
    g2[1][0] = sector;
    g2[1][1] = alpha_p;
    g2[2][0] = Psi;
    g2[2][2] = detail::scaled_identity(v.alpha_index(), n + m);
    LmiBlock stab2 = assemble_affine("stab2", {n, pw, n + m}, g2);

    p.constraints.push_back(detail::ellip_block(N, x0));
    p.constraints.push_back(std::move(stab));
    p.constraints.push_back(std::move(stab2));
    for (auto& b : detail::constraint_blocks(N, L, rows)) p.constraints.push_back(std::move(b));
    detail::finalize(p, opt.delta);
    return p;
}

/// Evaluates every block at a decision point.
inline std::vector<std::pair<std::string, SymMatrix>> evaluate(const LmiProblem& p, const DecisionPoint& dp) {
    const Vector t = p.vars.to_coordinates(dp);
    std::vector<std::pair<std::string, SymMatrix>> out;
    for (const auto& b : p.constraints) out.emplace_back(b.name, b.evaluate(t));
    return out;
}

/// Model-based form of the nominal Lyapunov condition for a given (A, B):
/// N - (AN + BL)(N - Psi^T Psi / alpha)^{-1}(AN + BL)^T. PSD for every member
/// of the consistent set when the data blocks hold.
inline SymMatrix lyapunov_model_form(const DecisionPoint& dp, const Weights& w, const Matrix& A, const Matrix& B) {
    const Matrix Ps = psi(dp.N, dp.L, w);
    const Matrix inner = dp.N - Ps.transpose() * Ps / dp.alpha;
    const Matrix anl = A * dp.N + B * dp.L;
    return SymMatrix::symmetrized(dp.N - anl * inner.ldlt().solve(anl.transpose()));
}

// ---------------------------------------------------------------------------
// Standalone checkers

struct FinslerPair {
    SymMatrix M;
    SymMatrix Xi;
    Eigen::Index split;  // k
};

/// True iff M - eps Xi is PSD (within tol).
inline bool finsler_check(const FinslerPair& fp, double eps, double tol = 0.0) {
    if (fp.M.side() != fp.Xi.side()) throw DimensionError("finsler_check: M and Xi differ in size");
    return is_psd(fp.M - fp.Xi * eps, tol);
}

/// [I; Z]^T S [I; Z] for S of side k + l and Z of shape l x k.
inline SymMatrix quadratic_on_graph(const SymMatrix& s, const Matrix& z) {
    const Eigen::Index k = z.cols();
    if (k + z.rows() != s.side()) throw DimensionError("quadratic_on_graph: shape mismatch");
    Matrix g(s.side(), k);
    g.topRows(k) = Matrix::Identity(k, k);
    g.bottomRows(z.rows()) = z;
    return SymMatrix::symmetrized(g.transpose() * s.matrix() * g);
}

struct EllipsoidReport {
    std::vector<double> margins;   // 1 - w_i alpha P^{-1} w_i^T
    std::vector<bool> contained;
    bool all_contained = true;
};

/// Containment of {x : x^T P x <= alpha} in {x : (c_i + d_i K) x <= 1}.
inline EllipsoidReport ellipsoid_contained(const Matrix& P, double alpha, const ConstraintRows& rows,
                                           const Matrix& K, double tol = 0.0) {
    const SymMatrix ps = SymMatrix::symmetrized(P);
    Eigen::LLT<Matrix> llt(ps.matrix());
    if (llt.info() != Eigen::Success || min_eigenvalue(ps) <= 0.0) {
        throw NumericalError("ellipsoid_contained: P is not positive definite");
    }
    EllipsoidReport r;
    for (const auto& row : rows.rows) {
        if (row.c.size() != P.rows()) throw DimensionError("ellipsoid_contained: row width");
        Eigen::RowVectorXd wi = row.c;
        if (row.d.size() > 0) {
            if (K.rows() != row.d.size() || K.cols() != P.rows()) throw DimensionError("ellipsoid_contained: K shape");
            wi += row.d * K;
        }
        const double q = alpha * wi.dot(llt.solve(wi.transpose()).col(0));
        const double margin = 1.0 - q;
        r.margins.push_back(margin);
        r.contained.push_back(margin >= -tol);
        r.all_contained = r.all_contained && margin >= -tol;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Debug dump: stable text listing of every block.

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void dump_matrix(std::ostream& os, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << " ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << ' ' << fmt_double(m(i, j));
        os << '\n';
    }
}

}  // namespace detail

inline void dump(std::ostream& os, const LmiProblem& p) {
    os << "lmi-problem mode=" << to_string(p.mode) << " n=" << p.dims.n << " m=" << p.dims.m << " p=" << p.dims.p
       << " r=" << p.dims.r << " zeta=" << p.dims.zeta << " T=";
    for (std::size_t i = 0; i < p.dims.T.size(); ++i) os << (i ? "," : "") << p.dims.T[i];
    os << " delta=" << detail::fmt_double(p.delta) << '\n';
    os << "vars " << p.vars.size() << ':';
    for (const auto& n : p.vars.names) os << ' ' << n;
    os << '\n';
    os << "objective " << p.vars.names[static_cast<std::size_t>(p.objective_index())] << '\n';
    for (const auto& b : p.constraints) {
        os << "block " << b.name << " side=" << b.side() << " margin=" << detail::fmt_double(b.margin) << '\n';
        os << "const\n";
        detail::dump_matrix(os, b.constant);
        for (const auto& [k, c] : b.coeffs) {
            os << "coef " << p.vars.names[static_cast<std::size_t>(k)] << '\n';
            detail::dump_matrix(os, c);
        }
        os << "end\n";
    }
}

inline std::string dump(const LmiProblem& p) {
    std::ostringstream os;
    dump(os, p);
    return os.str();
}

}  // namespace ddmpc
