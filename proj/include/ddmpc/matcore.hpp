#pragma once

// Dense symmetric-matrix algebra used by the LMI builders and the certificate
// checkers: block assembly, PSD tests, Schur complements, eigenvalues.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddmpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown for shape mismatches and violated preconditions on matrix inputs.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical precondition fails (singularity, loss of
/// definiteness, conditioning above the configured cap).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Relative asymmetry above which constructing a SymMatrix is an error.
inline constexpr double kAsymmetryAlarm = 1e-12;

/// Real symmetric matrix. Entries are symmetrized as (S + S^T)/2 on
/// construction; inputs whose asymmetry exceeds kAsymmetryAlarm relative to
/// their magnitude are rejected.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& m) : m_(check_and_symmetrize(m)) {}

    /// Averages without the asymmetry alarm. For products known to be
    /// symmetric up to rounding (e.g. alpha * N^{-1}).
    static SymMatrix symmetrized(const Matrix& m) {
        if (m.rows() != m.cols() || m.rows() < 1) {
            throw DimensionError("SymMatrix: expected a nonempty square matrix, got " + shape_str(m));
        }
        SymMatrix s;
        s.m_ = 0.5 * (m + m.transpose());
        return s;
    }

    static SymMatrix identity(Eigen::Index side) { return SymMatrix(Matrix::Identity(side, side)); }
    static SymMatrix zero(Eigen::Index side) { return SymMatrix(Matrix::Zero(side, side)); }
    static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

    Eigen::Index side() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    SymMatrix operator+(const SymMatrix& o) const { return symmetrized(m_ + o.m_); }
    SymMatrix operator-(const SymMatrix& o) const { return symmetrized(m_ - o.m_); }
    SymMatrix operator*(double c) const { return symmetrized(c * m_); }

private:
    SymMatrix() = default;

    static Matrix check_and_symmetrize(const Matrix& m) {
        if (m.rows() != m.cols() || m.rows() < 1) {
            throw DimensionError("SymMatrix: expected a nonempty square matrix, got " + shape_str(m));
        }
        const double scale = std::max(1.0, max_abs(m));
        const double asym = max_abs(m - m.transpose());
        if (asym > kAsymmetryAlarm * scale) {
            throw DimensionError("SymMatrix: asymmetry " + std::to_string(asym) +
                                 " exceeds relative threshold");
        }
        return 0.5 * (m + m.transpose());
    }

    Matrix m_;
};

/// Row/column partition of a block matrix. Symmetric assembly uses
/// row_sizes for both.
struct BlockLayout {
    std::vector<Eigen::Index> row_sizes;
    std::vector<Eigen::Index> col_sizes;

    static BlockLayout symmetric(std::vector<Eigen::Index> sizes) {
        BlockLayout l;
        l.row_sizes = sizes;
        l.col_sizes = std::move(sizes);
        return l;
    }

    Eigen::Index total_rows() const {
        Eigen::Index s = 0;
        for (auto r : row_sizes) s += r;
        return s;
    }
    Eigen::Index row_offset(std::size_t i) const {
        Eigen::Index s = 0;
        for (std::size_t k = 0; k < i; ++k) s += row_sizes[k];
        return s;
    }
};

/// A grid cell; std::nullopt marks a zero block.
using BlockCell = std::optional<Matrix>;
using BlockGrid = std::vector<std::vector<BlockCell>>;

/// Places the blocks of a symmetric grid into one dense symmetric matrix.
/// Cell (j,i) must equal the transpose of cell (i,j); zero markers expand to
/// zero blocks and match explicit zero matrices.
inline SymMatrix assemble_blocks(const BlockLayout& layout, const BlockGrid& blocks) {
    const auto& sizes = layout.row_sizes;
    const std::size_t nb = sizes.size();
    if (nb == 0) throw DimensionError("assemble_blocks: empty layout");
    if (layout.col_sizes != sizes) {
        throw DimensionError("assemble_blocks: symmetric assembly needs col_sizes == row_sizes");
    }
    for (auto s : sizes) {
        if (s < 1) throw DimensionError("assemble_blocks: block sizes must be positive");
    }
    if (blocks.size() != nb) throw DimensionError("assemble_blocks: grid row count does not match layout");
    for (const auto& row : blocks) {
        if (row.size() != nb) throw DimensionError("assemble_blocks: grid column count does not match layout");
    }

    const Eigen::Index side = layout.total_rows();
    Matrix out = Matrix::Zero(side, side);
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const auto& cell = blocks[i][j];
            if (!cell) continue;
            if (cell->rows() != sizes[i] || cell->cols() != sizes[j]) {
                throw DimensionError("assemble_blocks: block (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") has shape " + shape_str(*cell) + ", expected " +
                                     std::to_string(sizes[i]) + "x" + std::to_string(sizes[j]));
            }
            out.block(layout.row_offset(i), layout.row_offset(j), sizes[i], sizes[j]) = *cell;
        }
    }
    // Grid symmetry: compare the placed blocks against their mirror images.
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = i + 1; j < nb; ++j) {
            const auto oi = layout.row_offset(i);
            const auto oj = layout.row_offset(j);
            const Matrix upper = out.block(oi, oj, sizes[i], sizes[j]);
            const Matrix lower = out.block(oj, oi, sizes[j], sizes[i]);
            const double scale = std::max(1.0, std::max(max_abs(upper), max_abs(lower)));
            if (max_abs(upper - lower.transpose()) > kAsymmetryAlarm * scale) {
                throw DimensionError("assemble_blocks: block (" + std::to_string(j) + "," + std::to_string(i) +
                                     ") is not the transpose of block (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < nb; ++i) {
        const auto o = layout.row_offset(i);
        const Matrix d = out.block(o, o, sizes[i], sizes[i]);
        const double scale = std::max(1.0, max_abs(d));
        if (max_abs(d - d.transpose()) > kAsymmetryAlarm * scale) {
            throw DimensionError("assemble_blocks: diagonal block " + std::to_string(i) + " is not symmetric");
        }
    }
    return SymMatrix(out);
}

struct EigenReport {
    std::vector<double> eigenvalues;  // ascending (symmetric) or moduli ascending (general)
    double min_eig = 0.0;
    double spectral_radius = 0.0;
};

/// Eigenvalues of a symmetric matrix, ascending.
inline Vector symmetric_eigenvalues(const SymMatrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigenvalue iteration did not converge");
    return es.eigenvalues();
}

inline double min_eigenvalue(const SymMatrix& s) { return symmetric_eigenvalues(s)(0); }

inline EigenReport eigen_report(const SymMatrix& s) {
    const Vector ev = symmetric_eigenvalues(s);
    EigenReport r;
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.min_eig = ev(0);
    r.spectral_radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return r;
}

/// Eigenvalues of a general square matrix.
inline Eigen::VectorXcd general_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw DimensionError("general_eigenvalues: expected a nonempty square matrix, got " + shape_str(a));
    }
    Eigen::EigenSolver<Matrix> es(a, false);
    if (es.info() != Eigen::Success) throw NumericalError("real Schur iteration did not converge");
    return es.eigenvalues();
}

inline EigenReport eigen_report(const Matrix& a) {
    const Eigen::VectorXcd ev = general_eigenvalues(a);
    EigenReport r;
    for (Eigen::Index i = 0; i < ev.size(); ++i) r.eigenvalues.push_back(std::abs(ev(i)));
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    r.spectral_radius = r.eigenvalues.back();
    r.min_eig = std::numeric_limits<double>::quiet_NaN();  // undefined for complex spectra
    double min_real = std::numeric_limits<double>::infinity();
    bool all_real = true;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).imag()) > 0.0) all_real = false;
        min_real = std::min(min_real, ev(i).real());
    }
    if (all_real) r.min_eig = min_real;
    return r;
}

/// Largest eigenvalue modulus of a square matrix.
inline double spectral_radius(const Matrix& a) {
    const Eigen::VectorXcd ev = general_eigenvalues(a);
    double r = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) r = std::max(r, std::abs(ev(i)));
    return r;
}

/// True iff the smallest eigenvalue is >= -tol.
inline bool is_psd(const SymMatrix& s, double tol = 0.0) { return min_eigenvalue(s) >= -tol; }

/// Reject Schur complements whose pivot block is worse conditioned than this.
inline constexpr double kSchurConditionCap = 1e12;

/// Returns S11 - S12 S22^{-1} S12^T for the partition after row/col `split`.
inline SymMatrix schur_complement(const SymMatrix& s, Eigen::Index split,
                                  double condition_cap = kSchurConditionCap) {
    const Eigen::Index n = s.side();
    if (split < 1 || split >= n) {
        throw DimensionError("schur_complement: split " + std::to_string(split) + " outside (0, " +
                             std::to_string(n) + ")");
    }
    const Eigen::Index k = n - split;
    const Matrix s11 = s.matrix().topLeftCorner(split, split);
    const Matrix s12 = s.matrix().topRightCorner(split, k);
    const Matrix s22 = s.matrix().bottomRightCorner(k, k);

    const Vector ev = symmetric_eigenvalues(SymMatrix::symmetrized(s22));
    const double smallest = ev.cwiseAbs().minCoeff();
    const double largest = ev.cwiseAbs().maxCoeff();
    if (smallest == 0.0 || largest / smallest > condition_cap) {
        throw NumericalError("schur_complement: pivot block is singular or ill-conditioned (cond " +
                             (smallest == 0.0 ? std::string("inf") : std::to_string(largest / smallest)) + ")");
    }
    const Matrix x = s22.ldlt().solve(s12.transpose());
    return SymMatrix::symmetrized(s11 - s12 * x);
}

/// Symmetric principal square root of a positive definite matrix. Rejects
/// inputs whose smallest eigenvalue is below `margin`.
inline Matrix sqrt_pd(const Matrix& a, double margin = 1e-12) {
    const SymMatrix s(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("sqrt_pd: eigen decomposition failed");
    if (es.eigenvalues()(0) <= margin) {
        throw NumericalError("sqrt_pd: matrix is not positive definite (min eigenvalue " +
                             std::to_string(es.eigenvalues()(0)) + ")");
    }
    const Vector r = es.eigenvalues().cwiseSqrt();
    return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

/// 2-norm condition number estimate of a square matrix via its singular values.
inline double condition_number(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0.0;
    const double smin = sv(sv.size() - 1);
    return smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
}

/// Numerical rank with the SVD machine-precision rule sigma_max * max(dims) * rel_tol.
inline Eigen::Index numerical_rank(const Matrix& a, double rel_tol = 1e-12) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double tol = sv(0) * static_cast<double>(std::max(a.rows(), a.cols())) * rel_tol;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++r;
    }
    return r;
}

}  // namespace ddmpc
