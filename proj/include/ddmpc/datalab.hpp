#pragma once

// Open-loop experiments, data matrices and the set of systems consistent with
// the recorded data.

#include "ddmpc/matcore.hpp"
#include "ddmpc/plants.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace ddmpc {

/// Thrown when an open-loop experiment leaves the representable range.
class ExperimentOverflow : public NumericalError {
public:
    ExperimentOverflow(std::size_t step, const std::string& what)
        : NumericalError(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Thrown by consistent_set when no system reproduces the data.
class InconsistentData : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct Dataset {
    Matrix U_minus;                  // m x T
    Matrix X;                        // n x (T+1)
    std::optional<Matrix> W_minus;   // p x T (Lur'e runs)
    std::optional<std::uint64_t> seed;
    std::string provenance;
    std::optional<int> vertex;       // polytopic vertex tag

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index m() const { return U_minus.rows(); }
    Eigen::Index p() const { return W_minus ? W_minus->rows() : 0; }
    Eigen::Index T() const { return U_minus.cols(); }

    void validate() const {
        if (X.rows() < 1) throw DimensionError("Dataset: X needs at least one row");
        if (U_minus.rows() < 1) throw DimensionError("Dataset: U_minus needs at least one row");
        if (X.cols() != U_minus.cols() + 1) {
            throw DimensionError("Dataset: X must have T+1 columns (T = " + std::to_string(U_minus.cols()) + "), got " +
                                 std::to_string(X.cols()));
        }
        if (W_minus && W_minus->cols() != U_minus.cols()) {
            throw DimensionError("Dataset: W_minus must have T columns");
        }
    }
};

struct ShiftedData {
    Matrix X_minus;  // columns 0..T-1
    Matrix X_plus;   // columns 1..T
};

inline ShiftedData shift_split(const Dataset& d) {
    d.validate();
    if (d.T() < 1) throw DimensionError("shift_split: need T >= 1");
    return {d.X.leftCols(d.T()), d.X.rightCols(d.T())};
}

/// Seeded i.i.d. uniform samples on [lo_i, hi_i] per input channel.
inline Matrix excitation_inputs(const Vector& lo, const Vector& hi, Eigen::Index T, std::uint64_t seed) {
    if (lo.size() != hi.size() || lo.size() < 1) throw DimensionError("excitation_inputs: bound sizes differ");
    std::mt19937_64 rng(seed);
    Matrix u(lo.size(), T);
    for (Eigen::Index k = 0; k < T; ++k) {
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            std::uniform_real_distribution<double> dist(lo(i), hi(i));
            u(i, k) = dist(rng);
        }
    }
    return u;
}

inline Matrix excitation_inputs(Eigen::Index m, double bound, Eigen::Index T, std::uint64_t seed) {
    return excitation_inputs(Vector::Constant(m, -bound), Vector::Constant(m, bound), T, seed);
}

inline constexpr double kOverflowLimit = 1e150;

/// Steps the plant open loop from x0 under the given inputs.
inline Dataset run_experiment(const Plant& plant, const Vector& x0, const Matrix& inputs, bool record_w) {
    const Eigen::Index n = state_dim(plant);
    const Eigen::Index m = input_dim(plant);
    if (x0.size() != n) throw DimensionError("run_experiment: x0 has wrong size");
    if (inputs.rows() != m) throw DimensionError("run_experiment: inputs must have m rows");
    if (!inputs.allFinite()) throw DimensionError("run_experiment: inputs must be finite");

    const Eigen::Index T = inputs.cols();
    const auto* lure = std::get_if<LurePlant>(&plant);
    Dataset d;
    d.U_minus = inputs;
    d.X.resize(n, T + 1);
    d.X.col(0) = x0;
    if (record_w && lure) d.W_minus = Matrix(lure->p(), T);
    for (Eigen::Index k = 0; k < T; ++k) {
        const Vector x = d.X.col(k);
        if (d.W_minus) d.W_minus->col(k) = lure->gamma.apply(lure->H * x);
        const Vector next = step(plant, x, inputs.col(k));
        if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kOverflowLimit) {
            throw ExperimentOverflow(static_cast<std::size_t>(k), "run_experiment: state overflow");
        }
        d.X.col(k + 1) = next;
    }
    return d;
}

/// Z = [X-; U-; (W-)]
inline Matrix regressor(const Dataset& d, bool include_w) {
    const ShiftedData s = shift_split(d);
    const Eigen::Index p = include_w ? d.p() : 0;
    Matrix z(d.n() + d.m() + p, d.T());
    z.topRows(d.n()) = s.X_minus;
    z.middleRows(d.n(), d.m()) = d.U_minus;
    if (p > 0) z.bottomRows(p) = *d.W_minus;
    return z;
}

/// Stacked data vector [X+; -X-; -U-; (-W-)] whose outer product encodes
/// membership in the consistent set.
inline Matrix data_vector(const Dataset& d, bool include_w) {
    const ShiftedData s = shift_split(d);
    const Eigen::Index p = include_w ? d.p() : 0;
    if (include_w && !d.W_minus) throw DimensionError("data_vector: dataset has no W_minus");
    Matrix v(2 * d.n() + d.m() + p, d.T());
    v.topRows(d.n()) = s.X_plus;
    v.middleRows(d.n(), d.n()) = -s.X_minus;
    v.middleRows(2 * d.n(), d.m()) = -d.U_minus;
    if (p > 0) v.bottomRows(p) = -*d.W_minus;
    return v;
}

/// ||X+ - A X- - B U- (- E W-)||_F
inline double consistency_residual(const Dataset& d, const Matrix& A, const Matrix& B,
                                   const std::optional<Matrix>& E = std::nullopt) {
    const ShiftedData s = shift_split(d);
    if (A.rows() != d.n() || A.cols() != d.n()) throw DimensionError("consistency_residual: A shape");
    if (B.rows() != d.n() || B.cols() != d.m()) throw DimensionError("consistency_residual: B shape");
    Matrix r = s.X_plus - A * s.X_minus - B * d.U_minus;
    if (E) {
        if (!d.W_minus) throw DimensionError("consistency_residual: E supplied but dataset has no W_minus");
        if (E->rows() != d.n() || E->cols() != d.p()) throw DimensionError("consistency_residual: E shape");
        r -= *E * *d.W_minus;
    }
    return r.norm();
}

inline Eigen::Index regressor_rank(const Dataset& d, double rel_tol = 1e-12) {
    return numerical_rank(regressor(d, d.W_minus.has_value()), rel_tol);
}

struct SystemMatrices {
    Matrix A;
    Matrix B;
    std::optional<Matrix> E;
};

struct ConsistentSet {
    Matrix particular;           // n x (n+m(+p)), least-norm [A B (E)]
    Matrix nullbasis;            // k x (n+m(+p)), rows span {v : v Z = 0}
    Eigen::Index regressor_rank = 0;
    Eigen::Index n = 0, m = 0, p = 0;

    SystemMatrices split(const Matrix& abe) const {
        SystemMatrices s;
        s.A = abe.leftCols(n);
        s.B = abe.middleCols(n, m);
        if (p > 0) s.E = abe.rightCols(p);
        return s;
    }

    SystemMatrices particular_system() const { return split(particular); }

    /// particular + C * nullbasis with C having i.i.d. N(0, scale^2) entries.
    SystemMatrices sample(std::mt19937_64& rng, double scale = 1.0) const {
        Matrix abe = particular;
        if (nullbasis.rows() > 0) {
            std::normal_distribution<double> dist(0.0, scale);
            Matrix c(n, nullbasis.rows());
            for (Eigen::Index i = 0; i < c.rows(); ++i) {
                for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = dist(rng);
            }
            abe += c * nullbasis;
        }
        return split(abe);
    }

    std::vector<SystemMatrices> samples(std::size_t count, std::uint64_t seed, double scale = 1.0) const {
        std::mt19937_64 rng(seed);
        std::vector<SystemMatrices> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(sample(rng, scale));
        return out;
    }
};

/// All systems reproducing the data: particular = X+ Z^+, plus any C with
/// C Z = 0.
inline ConsistentSet consistent_set(const Dataset& d, bool lure, double rel_tol = 1e-12) {
    if (lure && !d.W_minus) throw DimensionError("consistent_set: Lur'e mode requires W_minus");
    const ShiftedData s = shift_split(d);
    const Matrix z = regressor(d, lure);
    ConsistentSet cs;
    cs.n = d.n();
    cs.m = d.m();
    cs.p = lure ? d.p() : 0;

    Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = sv.size() > 0 && sv(0) > 0.0
                           ? sv(0) * static_cast<double>(std::max(z.rows(), z.cols())) * rel_tol
                           : 0.0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol && sv(i) > 0.0) ++r;
    }
    cs.regressor_rank = r;

    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    // Z^+ = V_r S_r^{-1} U_r^T
    Matrix pinv = Matrix::Zero(z.cols(), z.rows());
    for (Eigen::Index i = 0; i < r; ++i) pinv += v.col(i) * (1.0 / sv(i)) * u.col(i).transpose();
    cs.particular = s.X_plus * pinv;
    cs.nullbasis = u.rightCols(z.rows() - r).transpose();

    const double resid = (s.X_plus - cs.particular * z).norm();
    if (resid > 1e-6 * std::max(1.0, s.X_plus.norm())) {
        throw InconsistentData("consistent_set: no system reproduces the data (residual " + std::to_string(resid) +
                               ")");
    }
    return cs;
}

}  // namespace ddmpc
