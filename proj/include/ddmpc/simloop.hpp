#pragma once

// Closed-loop simulation under u = K x with cost, Lyapunov and constraint
// bookkeeping.

#include "ddmpc/lmi.hpp"
#include "ddmpc/plants.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ddmpc {

/// Thrown when a closed-loop state leaves the representable range.
class DivergenceError : public NumericalError {
public:
    DivergenceError(std::size_t step, const std::string& what)
        : NumericalError(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Online re-synthesis hook: returns a new gain for the state at step k, or
/// nullopt when the re-solve fails.
using ResolveFn = std::function<std::optional<Matrix>(const Vector& x, std::size_t k)>;

struct SimOptions {
    double convergence_threshold = 1e-3;
    double divergence_limit = 1e150;
    ResolveFn resolve;
};

struct SimResult {
    Matrix states;   // n x (steps+1)
    Matrix inputs;   // m x steps
    std::vector<double> stage_costs;
    std::vector<double> lyapunov;                    // x' P x per state (empty without P)
    std::vector<std::vector<double>> constraint_margins;  // [k][i] = 1 - (c_i x + d_i u)
    std::vector<double> sector_residuals;            // Lur'e: w (beta H x - w), p = 1 summed
    double total_cost = 0.0;
    bool converged = false;
    std::optional<std::size_t> convergence_step;
    std::vector<std::size_t> resolve_failures;

    std::size_t steps() const { return stage_costs.size(); }

    double min_constraint_margin() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& row : constraint_margins) {
            for (double v : row) m = std::min(m, v);
        }
        return m;
    }
};

inline SimResult simulate(const Plant& plant, const Matrix& K, const Vector& x0, std::size_t steps, const Weights& w,
                          const ConstraintRows& rows, const std::optional<Matrix>& P = std::nullopt,
                          const SimOptions& opt = {}) {
    const Eigen::Index n = state_dim(plant), m = input_dim(plant);
    if (steps < 1) throw DimensionError("simulate: steps must be >= 1");
    if (K.rows() != m || K.cols() != n) throw DimensionError("simulate: K must be " + std::to_string(m) + "x" + std::to_string(n) + ", got " + shape_str(K));
    if (x0.size() != n) throw DimensionError("simulate: x0 has wrong size");
    if (w.n() != n || w.m() != m) throw DimensionError("simulate: weights do not match the plant");
    if (!rows.empty() && (rows.n != n || rows.m != m)) throw DimensionError("simulate: constraint rows do not match the plant");
    if (P && (P->rows() != n || P->cols() != n)) throw DimensionError("simulate: P must be nxn");

    const auto* lure = std::get_if<LurePlant>(&plant);
    // Polytopic plants are stepped through the fixed interpolated system.
    std::optional<LtiPlant> mixed;
    if (const auto* poly = std::get_if<PolytopicPlant>(&plant)) mixed = interpolate_vertices(*poly);

    SimResult r;
    r.states.resize(n, static_cast<Eigen::Index>(steps) + 1);
    r.inputs.resize(m, static_cast<Eigen::Index>(steps));
    r.states.col(0) = x0;
    Matrix gain = K;

    auto check_converged = [&](const Vector& x, std::size_t k) {
        if (!r.converged && x.cwiseAbs().maxCoeff() < opt.convergence_threshold) {
            r.converged = true;
            r.convergence_step = k;
        }
    };
    check_converged(x0, 0);
    if (P) r.lyapunov.push_back(x0.dot(*P * x0));

    for (std::size_t k = 0; k < steps; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const Vector x = r.states.col(kk);
        if (opt.resolve) {
            if (auto g = opt.resolve(x, k)) {
                if (g->rows() != m || g->cols() != n) throw DimensionError("simulate: resolve returned a gain of the wrong shape");
                gain = *g;
            } else {
                r.resolve_failures.push_back(k);
            }
        }
        const Vector u = gain * x;
        r.inputs.col(kk) = u;
        const double stage = x.dot(w.Q * x) + u.dot(w.R * u);
        r.stage_costs.push_back(stage);
        r.total_cost += stage;

        std::vector<double> margins;
        margins.reserve(rows.size());
        for (const auto& row : rows.rows) margins.push_back(1.0 - (row.c.dot(x) + row.d.dot(u)));
        r.constraint_margins.push_back(std::move(margins));

        Vector next;
        if (lure) {
            const Vector z = lure->H * x;
            const Vector g = lure->gamma.apply(z);
            r.sector_residuals.push_back(g.dot(lure->beta * z - g));
            next = step_lure(*lure, x, u);
        } else if (mixed) {
            next = step_lti(*mixed, x, u);
        } else {
            next = step(plant, x, u);
        }
        if (!next.allFinite() || next.cwiseAbs().maxCoeff() > opt.divergence_limit) {
            throw DivergenceError(k, "simulate: closed loop diverged");
        }
        r.states.col(kk + 1) = next;
        if (P) r.lyapunov.push_back(next.dot(*P * next));
        check_converged(next, k + 1);
    }
    return r;
}

struct CostReport {
    double J = 0.0;
    std::optional<double> tail_bound;  // estimate of the truncated remainder
};

/// J plus, for converged runs, the tail estimate stage(conv) / (1 - decay)
/// with decay the geometric-mean stage-cost ratio after convergence.
inline CostReport accumulated_cost(const SimResult& sr) {
    CostReport c;
    c.J = sr.total_cost;
    if (!sr.converged || sr.stage_costs.empty()) return c;
    const std::size_t first = std::min(*sr.convergence_step, sr.stage_costs.size() - 1);
    const std::size_t last = sr.stage_costs.size() - 1;
    const double s0 = sr.stage_costs[first];
    const double s1 = sr.stage_costs[last];
    if (s0 == 0.0) {
        c.tail_bound = 0.0;
        return c;
    }
    if (last == first || s1 <= 0.0) return c;
    const double decay = std::pow(s1 / s0, 1.0 / static_cast<double>(last - first));
    if (decay < 1.0) c.tail_bound = s0 / (1.0 - decay);
    return c;
}

struct BoundCheck {
    bool ok = false;
    double slack = 0.0;
};

inline BoundCheck check_against_bound(const SimResult& sr, double alpha) {
    return {sr.total_cost <= alpha * (1.0 + 1e-6) + 1e-9, alpha - sr.total_cost};
}

/// Largest V(k+1) - V(k) + stage(k) along the run (requires P).
inline double max_lyapunov_decrease_residual(const SimResult& sr) {
    if (sr.lyapunov.size() != sr.stage_costs.size() + 1) throw std::invalid_argument("simulation was run without P");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sr.stage_costs.size(); ++k) {
        worst = std::max(worst, sr.lyapunov[k + 1] - sr.lyapunov[k] + sr.stage_costs[k]);
    }
    return worst;
}

}  // namespace ddmpc
