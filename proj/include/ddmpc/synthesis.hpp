#pragma once

// Build -> solve -> recover (K, P, alpha) -> verify pipelines.

#include "ddmpc/datalab.hpp"
#include "ddmpc/lmi.hpp"
#include "ddmpc/sdp.hpp"
#include "ddmpc/simloop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ddmpc {

struct Controller {
    Matrix K;
    Matrix P;
    double alpha = 0.0;
    DecisionPoint raw;
    Mode mode = Mode::nominal;
    Vector x0;
    std::optional<Matrix> H;     // Lur'e only
    std::optional<Matrix> beta;  // Lur'e only
};

struct GainPair {
    Matrix K;
    Matrix P;
};

inline constexpr double kGainConditionCap = 1e10;

/// K = L N^{-1}, P = alpha N^{-1}.
inline GainPair recover_gain(const DecisionPoint& dp) {
    if (dp.N.rows() != dp.N.cols() || dp.L.cols() != dp.N.rows()) throw DimensionError("recover_gain: N must be nxn and L mxn");
    const double cond = condition_number(dp.N);
    if (!(cond <= kGainConditionCap)) {
        throw NumericalError("recover_gain: N is near-singular (condition " + std::to_string(cond) + ")");
    }
    const Eigen::PartialPivLU<Matrix> lu(dp.N);
    const Matrix Ninv = lu.inverse();
    GainPair g;
    g.K = dp.L * Ninv;
    g.P = SymMatrix::symmetrized(dp.alpha * Ninv).matrix();
    return g;
}

struct VerifyOptions {
    std::size_t samples = 20;
    std::uint64_t seed = 20240601;
    double sample_scale = 1.0;
    std::size_t sim_steps = 2000;
    double lmi_tol = 1e-6;
    double lyapunov_rel_tol = 1e-8;
    std::optional<Plant> plant;  // simulated in addition to the data-consistent systems
};

struct CertificateReport {
    std::vector<BlockResidual> lmi_residuals;
    bool lmi_ok = false;
    std::vector<double> vertex_radii;
    double max_radius = 0.0;
    bool stability_ok = false;
    std::vector<double> ellipsoid_margins;
    bool constraints_ok = false;
    double max_lyapunov_residual = 0.0;
    bool lyapunov_ok = false;
    double simulated_cost = 0.0;
    double cost_slack = 0.0;
    bool cost_bound_ok = false;
    std::optional<double> min_sector_residual;
    bool sector_ok = true;
    std::size_t simulations = 0;
    std::vector<std::string> notes;

    bool pass() const {
        return lmi_ok && stability_ok && constraints_ok && lyapunov_ok && cost_bound_ok && sector_ok;
    }
};

/// Closed-loop matrices whose spectral radius the certificate bounds: A + BK
/// for linear members, and A + BK + E (t beta) H for t in {0, 1/2, 1} for
/// Lur'e members (linear nonlinearities inside the sector).
inline std::vector<Matrix> certified_closed_loops(const SystemMatrices& s, const Matrix& K, const Controller& c) {
    std::vector<Matrix> out;
    const Matrix acl = s.A + s.B * K;
    if (c.mode == Mode::lure && s.E && c.H && c.beta) {
        for (double t : {0.0, 0.5, 1.0}) out.push_back(acl + *s.E * (t * *c.beta) * *c.H);
    } else {
        out.push_back(acl);
    }
    return out;
}

namespace detail {

inline void absorb_simulation(CertificateReport& rep, const SimResult& sr, double alpha, double lyap_tol) {
    ++rep.simulations;
    const double lres = max_lyapunov_decrease_residual(sr);
    rep.max_lyapunov_residual = std::max(rep.max_lyapunov_residual, lres);
    if (!(lres <= lyap_tol)) rep.lyapunov_ok = false;
    const auto bc = check_against_bound(sr, alpha);
    rep.simulated_cost = std::max(rep.simulated_cost, sr.total_cost);
    rep.cost_slack = std::min(rep.cost_slack, bc.slack);
    if (!bc.ok) rep.cost_bound_ok = false;
    for (double v : sr.sector_residuals) {
        rep.min_sector_residual = rep.min_sector_residual ? std::min(*rep.min_sector_residual, v) : v;
        if (v < -1e-12) rep.sector_ok = false;
    }
}

}  // namespace detail

/// Independent re-verification of a controller: (a) LMI residuals at the raw
/// point, (b) closed-loop spectral radii over data-consistent samples,
/// (c) ellipsoid containment, (d) simulated Lyapunov decrease, (e) cost bound.
inline CertificateReport verify_certificate(const Controller& ctrl, const LmiProblem& problem,
                                            const std::vector<ConsistentSet>& consistent, const ConstraintRows& rows,
                                            const Weights& w, const VerifyOptions& opt = {}) {
    CertificateReport rep;

    // (a)
    const SolutionCheck sc = check_solution(problem, ctrl.raw, opt.lmi_tol);
    rep.lmi_residuals = sc.blocks;
    rep.lmi_ok = sc.pass;

    // (b)
    rep.stability_ok = true;
    std::vector<SystemMatrices> systems;
    for (std::size_t j = 0; j < consistent.size(); ++j) {
        const auto& cs = consistent[j];
        if (cs.nullbasis.rows() == 0) {
            systems.push_back(cs.particular_system());
        } else {
            for (auto& s : cs.samples(opt.samples, opt.seed + j, opt.sample_scale)) systems.push_back(std::move(s));
        }
    }
    for (const auto& s : systems) {
        for (const auto& acl : certified_closed_loops(s, ctrl.K, ctrl)) {
            const double rho = spectral_radius(acl);
            rep.vertex_radii.push_back(rho);
            rep.max_radius = std::max(rep.max_radius, rho);
            if (!(rho < 1.0)) rep.stability_ok = false;
        }
    }
    if (systems.empty()) rep.notes.push_back("no data-consistent systems supplied; spectral radii not checked");

    // (c)
    try {
        const auto er = ellipsoid_contained(ctrl.P, ctrl.alpha, rows, ctrl.K);
        rep.ellipsoid_margins = er.margins;
        rep.constraints_ok = er.all_contained;
    } catch (const NumericalError& e) {
        rep.constraints_ok = false;
        rep.notes.push_back(e.what());
    }

    // (d), (e)
    rep.lyapunov_ok = true;
    rep.cost_bound_ok = true;
    rep.cost_slack = std::numeric_limits<double>::infinity();
    rep.max_lyapunov_residual = -std::numeric_limits<double>::infinity();
    const double lyap_tol = opt.lyapunov_rel_tol * ctrl.alpha;
    std::vector<Plant> sims;
    if (opt.plant) sims.push_back(*opt.plant);
    if (ctrl.mode != Mode::lure) {
        for (const auto& cs : consistent) {
            const auto s = cs.particular_system();
            sims.emplace_back(LtiPlant(s.A, s.B));
        }
    } else if (!opt.plant) {
        rep.notes.push_back("no Lur'e plant supplied; simulation checks ran on no systems");
    }
    for (const auto& plant : sims) {
        try {
            const SimResult sr = simulate(plant, ctrl.K, ctrl.x0, opt.sim_steps, w, rows, ctrl.P);
            detail::absorb_simulation(rep, sr, ctrl.alpha, lyap_tol);
        } catch (const DivergenceError& e) {
            rep.lyapunov_ok = false;
            rep.cost_bound_ok = false;
            rep.notes.push_back(e.what());
        }
    }
    if (sims.empty()) {
        rep.lyapunov_ok = false;
        rep.cost_bound_ok = false;
        rep.cost_slack = 0.0;
    }
    return rep;
}

struct SynthesisSettings {
    SolverSettings solver;
    bool per_vertex_epsilon = false;
    VerifyOptions verify;
};

struct SynthesisResult {
    LmiProblem problem;
    Solution solution;
    std::optional<Controller> controller;
    CertificateReport report;

    /// Informativity verdict: solver optimal, raw point re-checked, and all
    /// certificates pass. Failure means "not established", never "impossible".
    bool established() const { return controller.has_value() && solution.status == SolveStatus::optimal && report.pass(); }
};

namespace detail {

inline SynthesisResult finish(LmiProblem problem, const std::vector<ConsistentSet>& consistent,
                              const ConstraintRows& rows, const Weights& w, const Vector& x0,
                              const SynthesisSettings& s, std::optional<Matrix> H = std::nullopt,
                              std::optional<Matrix> beta = std::nullopt) {
    SynthesisResult r;
    auto [sol, dp] = solve(problem, s.solver);
    r.problem = std::move(problem);
    r.solution = std::move(sol);
    if (!dp) {
        r.report.notes.push_back("solver status " + to_string(r.solution.status) + ": informativity not established");
        if (!r.solution.message.empty()) r.report.notes.push_back(r.solution.message);
        return r;
    }
    Controller c;
    try {
        const GainPair g = recover_gain(*dp);
        c.K = g.K;
        c.P = g.P;
    } catch (const NumericalError& e) {
        r.report.notes.push_back(e.what());
        return r;
    }
    c.alpha = dp->alpha;
    c.raw = *dp;
    c.mode = r.problem.mode;
    c.x0 = x0;
    c.H = std::move(H);
    c.beta = std::move(beta);
    r.report = verify_certificate(c, r.problem, consistent, rows, w, s.verify);
    r.controller = std::move(c);
    return r;
}

}  // namespace detail

inline SynthesisResult synthesize_nominal(const Dataset& d, const Weights& w, const ConstraintRows& rows,
                                          const Vector& x0, const SynthesisSettings& s = {}) {
    LmiOptions lo{s.solver.delta, false};
    LmiProblem p = build_nominal(d, w, rows, x0, lo);
    return detail::finish(std::move(p), {consistent_set(d, false)}, rows, w, x0, s);
}

inline SynthesisResult synthesize_polytopic(const std::vector<Dataset>& ds, const Weights& w,
                                            const ConstraintRows& rows, const Vector& x0,
                                            const SynthesisSettings& s = {}) {
    LmiOptions lo{s.solver.delta, s.per_vertex_epsilon};
    LmiProblem p = build_polytopic(ds, w, rows, x0, lo);
    std::vector<ConsistentSet> cs;
    for (const auto& d : ds) cs.push_back(consistent_set(d, false));
    return detail::finish(std::move(p), cs, rows, w, x0, s);
}

/// When gamma is given it must pass the sampled sector test for the scalar
/// slope beta(0,0) on the default grid.
inline SynthesisResult synthesize_lure(const Dataset& d, const Weights& w, const ConstraintRows& rows,
                                       const Vector& x0, const Matrix& H, const Matrix& beta,
                                       const SynthesisSettings& s = {},
                                       const std::optional<Nonlinearity>& gamma = std::nullopt) {
    if (!d.W_minus) throw DimensionError("synthesize_lure: dataset has no W_minus");
    if (gamma && beta.size() == 1) {
        const SectorReport sr = sector_check(*gamma, beta(0, 0));
        if (sr.violating_z) {
            throw std::invalid_argument("synthesize_lure: nonlinearity '" + gamma->name() + "' leaves the sector at z = " +
                                        std::to_string(*sr.violating_z));
        }
    }
    LmiOptions lo{s.solver.delta, false};
    LmiProblem p = build_lure(d, w, rows, x0, H, beta, lo);
    return detail::finish(std::move(p), {consistent_set(d, true)}, rows, w, x0, s, H, beta);
}

}  // namespace ddmpc
