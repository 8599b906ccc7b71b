#pragma once

// Executable discrete-time plant models: LTI, polytopic (convex hull of
// vertex pairs), and Lur'e (linear part in feedback with a static
// sector-bounded nonlinearity).

#include "ddmpc/matcore.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ddmpc {

struct LtiPlant {
    Matrix A;
    Matrix B;

    LtiPlant() = default;
    LtiPlant(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) { validate(); }

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }

    void validate() const {
        if (A.rows() < 1 || A.rows() != A.cols()) throw DimensionError("LtiPlant: A must be square, got " + shape_str(A));
        if (B.rows() != A.rows() || B.cols() < 1) {
            throw DimensionError("LtiPlant: B must be " + std::to_string(A.rows()) + "xm, got " + shape_str(B));
        }
    }
};

struct PolytopicPlant {
    std::vector<LtiPlant> vertices;
    Vector mixing_weights;  // simulation only

    Eigen::Index n() const { return vertices.front().n(); }
    Eigen::Index m() const { return vertices.front().m(); }

    void validate() const {
        if (vertices.empty()) throw DimensionError("PolytopicPlant: at least one vertex required");
        for (const auto& v : vertices) {
            v.validate();
            if (v.n() != n() || v.m() != m()) throw DimensionError("PolytopicPlant: vertex shapes differ");
        }
        if (mixing_weights.size() != static_cast<Eigen::Index>(vertices.size())) {
            throw DimensionError("PolytopicPlant: expected " + std::to_string(vertices.size()) + " mixing weights");
        }
        if ((mixing_weights.array() < 0.0).any()) throw DimensionError("PolytopicPlant: negative mixing weight");
        if (std::abs(mixing_weights.sum() - 1.0) > 1e-12) {
            throw DimensionError("PolytopicPlant: mixing weights must sum to 1");
        }
    }
};

/// Named scalar nonlinearity applied componentwise. Built-ins keep datasets
/// reproducible from configuration alone.
class Nonlinearity {
public:
    enum class Kind { zero, sin_plus_identity, saturation, linear, tabulated };

    static Nonlinearity zero() { return Nonlinearity(Kind::zero); }
    static Nonlinearity sin_plus_identity() { return Nonlinearity(Kind::sin_plus_identity); }
    static Nonlinearity saturation(double level) {
        if (!(level > 0.0)) throw std::invalid_argument("saturation level must be positive");
        Nonlinearity g(Kind::saturation);
        g.param_ = level;
        return g;
    }
    static Nonlinearity linear(double slope) {
        Nonlinearity g(Kind::linear);
        g.param_ = slope;
        return g;
    }
    /// Piecewise-linear through (z, gamma) knots, extended linearly beyond
    /// the first and last segments. z must be strictly increasing.
    static Nonlinearity tabulated(std::vector<double> z, std::vector<double> gamma) {
        if (z.size() < 2 || z.size() != gamma.size()) {
            throw std::invalid_argument("tabulated nonlinearity needs >= 2 matching knots");
        }
        for (std::size_t i = 1; i < z.size(); ++i) {
            if (!(z[i] > z[i - 1])) throw std::invalid_argument("tabulated knots must be strictly increasing");
        }
        Nonlinearity g(Kind::tabulated);
        g.z_ = std::move(z);
        g.gamma_ = std::move(gamma);
        return g;
    }

    static Nonlinearity from_name(const std::string& name, double param = 0.0) {
        if (name == "zero") return zero();
        if (name == "sin_plus_identity") return sin_plus_identity();
        if (name == "saturation") return saturation(param);
        if (name == "linear") return linear(param);
        throw std::invalid_argument("unknown nonlinearity '" + name + "'");
    }

    Kind kind() const { return kind_; }
    double param() const { return param_; }
    const std::vector<double>& knots_z() const { return z_; }
    const std::vector<double>& knots_gamma() const { return gamma_; }

    std::string name() const {
        switch (kind_) {
            case Kind::zero: return "zero";
            case Kind::sin_plus_identity: return "sin_plus_identity";
            case Kind::saturation: return "saturation";
            case Kind::linear: return "linear";
            case Kind::tabulated: return "tabulated";
        }
        return "unknown";
    }

    double operator()(double z) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::sin_plus_identity: return std::sin(z) + z;
            case Kind::saturation: return std::clamp(z, -param_, param_);
            case Kind::linear: return param_ * z;
            case Kind::tabulated: return interpolate(z);
        }
        return 0.0;
    }

    Vector apply(const Vector& z) const {
        Vector out(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            out(i) = (*this)(z(i));
            if (!std::isfinite(out(i))) throw NumericalError("nonlinearity evaluation produced a non-finite value");
        }
        return out;
    }

private:
    explicit Nonlinearity(Kind k) : kind_(k) {}

    double interpolate(double z) const {
        std::size_t hi = 1;
        while (hi + 1 < z_.size() && z > z_[hi]) ++hi;
        const std::size_t lo = hi - 1;
        const double t = (z - z_[lo]) / (z_[hi] - z_[lo]);
        return gamma_[lo] + t * (gamma_[hi] - gamma_[lo]);
    }

    Kind kind_ = Kind::zero;
    double param_ = 0.0;
    std::vector<double> z_;
    std::vector<double> gamma_;
};

struct LurePlant {
    Matrix A;
    Matrix B;
    Matrix E;
    Matrix H;
    Nonlinearity gamma = Nonlinearity::zero();
    Matrix beta;  // p x p sector slope

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return E.cols(); }

    LtiPlant linear_part() const { return LtiPlant(A, B); }

    void validate() const {
        LtiPlant(A, B);
        if (E.rows() != n() || E.cols() < 1) throw DimensionError("LurePlant: E must be nxp, got " + shape_str(E));
        if (H.rows() != p() || H.cols() != n()) throw DimensionError("LurePlant: H must be pxn, got " + shape_str(H));
        if (beta.rows() != p() || beta.cols() != p()) {
            throw DimensionError("LurePlant: beta must be pxp, got " + shape_str(beta));
        }
        if ((beta.array() < 0.0).any()) throw DimensionError("LurePlant: sector slope entries must be nonnegative");
    }
};

using Plant = std::variant<LtiPlant, PolytopicPlant, LurePlant>;

inline Eigen::Index state_dim(const Plant& p) {
    return std::visit([](const auto& q) { return q.n(); }, p);
}
inline Eigen::Index input_dim(const Plant& p) {
    return std::visit([](const auto& q) { return q.m(); }, p);
}

inline void check_step_dims(Eigen::Index n, Eigen::Index m, const Vector& x, const Vector& u) {
    if (x.size() != n) throw DimensionError("step: state has " + std::to_string(x.size()) + " entries, expected " + std::to_string(n));
    if (u.size() != m) throw DimensionError("step: input has " + std::to_string(u.size()) + " entries, expected " + std::to_string(m));
}

/// x(k+1) = A x + B u
inline Vector step_lti(const LtiPlant& plant, const Vector& x, const Vector& u) {
    check_step_dims(plant.n(), plant.m(), x, u);
    return plant.A * x + plant.B * u;
}

/// x(k+1) = A x + B u + E gamma(H x)
inline Vector step_lure(const LurePlant& plant, const Vector& x, const Vector& u) {
    check_step_dims(plant.n(), plant.m(), x, u);
    return plant.A * x + plant.B * u + plant.E * plant.gamma.apply(plant.H * x);
}

/// (sum_j lambda_j A_j, sum_j lambda_j B_j)
inline LtiPlant interpolate_vertices(const PolytopicPlant& plant) {
    plant.validate();
    Matrix a = Matrix::Zero(plant.n(), plant.n());
    Matrix b = Matrix::Zero(plant.n(), plant.m());
    for (std::size_t j = 0; j < plant.vertices.size(); ++j) {
        const double w = plant.mixing_weights(static_cast<Eigen::Index>(j));
        a += w * plant.vertices[j].A;
        b += w * plant.vertices[j].B;
    }
    return LtiPlant(a, b);
}

/// One step of any plant; polytopic plants step the interpolated system.
inline Vector step(const Plant& plant, const Vector& x, const Vector& u) {
    return std::visit(
        [&](const auto& p) -> Vector {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LtiPlant>) {
                return step_lti(p, x, u);
            } else if constexpr (std::is_same_v<T, PolytopicPlant>) {
                return step_lti(interpolate_vertices(p), x, u);
            } else {
                return step_lure(p, x, u);
            }
        },
        plant);
}

struct SectorReport {
    std::vector<double> grid;
    std::vector<double> products;
    double min_product = 0.0;
    std::optional<double> violating_z;
};

/// Uniform grid of `count` points on [lo, hi].
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return g;
}

inline constexpr double kSectorGridLo = -10.0;
inline constexpr double kSectorGridHi = 10.0;
inline constexpr std::size_t kSectorGridCount = 10000;

/// Sampled test of gamma(z) (beta z - gamma(z)) >= 0. Can only falsify the
/// sector bound, never prove it.
inline SectorReport sector_check(const Nonlinearity& gamma, double beta, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sector_check: empty grid");
    SectorReport r;
    r.grid = grid;
    r.products.reserve(grid.size());
    r.min_product = std::numeric_limits<double>::infinity();
    for (double z : grid) {
        const double g = gamma(z);
        const double prod = g * (beta * z - g);
        r.products.push_back(prod);
        r.min_product = std::min(r.min_product, prod);
        if (prod < 0.0 && !r.violating_z) r.violating_z = z;
    }
    return r;
}

inline SectorReport sector_check(const Nonlinearity& gamma, double beta) {
    return sector_check(gamma, beta, uniform_grid(kSectorGridLo, kSectorGridHi, kSectorGridCount));
}

}  // namespace ddmpc
