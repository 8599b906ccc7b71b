#pragma once

// End-to-end reproduction of the embedded examples: generate data, synthesize,
// verify, simulate on the true plant, and compare with the published claims.

#include "ddmpc/presets.hpp"
#include "ddmpc/synthesis.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ddmpc {

struct ReproOptions {
    std::optional<std::uint64_t> seed;  // replaces the preset seeds with seed, seed+1, ...
    SolverSettings solver;
    std::optional<std::size_t> steps;
    bool use_paper_gain = false;
    bool resolve_online = false;
};

struct ReproResult {
    presets::Example example;
    std::vector<Dataset> datasets;
    std::optional<SynthesisResult> synthesis;  // absent on the paper-gain path
    Matrix K;
    std::optional<SimResult> sim;
    std::vector<double> true_radii;  // closed loops of the true plant
    double max_abs_u = 0.0;
    double min_margin = 0.0;
    bool stabilized = false;
    bool constraints_ok = false;
    bool converged = false;
    std::optional<bool> cost_ok;      // needs alpha
    std::optional<bool> lyapunov_ok;  // needs P
    std::optional<bool> sector_ok;    // Lur'e only
    std::string failed_stage;         // empty when every stage ran
    std::vector<std::string> notes;

    bool pass() const {
        const bool certs = !synthesis || synthesis->established();
        return failed_stage.empty() && certs && stabilized && constraints_ok && converged && cost_ok.value_or(true) &&
               lyapunov_ok.value_or(true) && sector_ok.value_or(true);
    }
};

inline constexpr double kRadiusMargin = 1e-4;
inline constexpr double kMarginTol = 1e-8;

inline std::vector<Dataset> generate_datasets(const presets::Example& e, std::optional<std::uint64_t> seed = std::nullopt) {
    std::vector<Dataset> out;
    const bool lure = e.mode == Mode::lure;
    for (std::size_t j = 0; j < e.data_plants.size(); ++j) {
        const std::uint64_t s = seed ? *seed + j : e.seeds.at(j);
        const Matrix u = excitation_inputs(e.R.rows(), e.input_bound, e.T, s);
        Dataset d = run_experiment(e.data_plants[j], e.data_x0, u, lure);
        d.seed = s;
        d.provenance = "preset " + e.name + " v" + std::to_string(presets::kPresetVersion) +
                       (e.data_plants.size() > 1 ? " vertex " + std::to_string(j + 1) : std::string());
        if (e.data_plants.size() > 1) d.vertex = static_cast<int>(j);
        out.push_back(std::move(d));
    }
    return out;
}

/// Spectral radii of the closed loops of the true plant: every vertex of a
/// polytope, the sector-linear members of a Lur'e plant.
inline std::vector<double> true_closed_loop_radii(const Plant& plant, const Matrix& K) {
    std::vector<double> r;
    if (const auto* p = std::get_if<LtiPlant>(&plant)) r.push_back(spectral_radius(p->A + p->B * K));
    if (const auto* p = std::get_if<PolytopicPlant>(&plant)) {
        for (const auto& v : p->vertices) r.push_back(spectral_radius(v.A + v.B * K));
    }
    if (const auto* p = std::get_if<LurePlant>(&plant)) {
        for (double t : {0.0, 0.5, 1.0}) r.push_back(spectral_radius(p->A + p->B * K + p->E * (t * p->beta) * p->H));
    }
    return r;
}

namespace detail {

inline SynthesisResult synthesize_example(const presets::Example& e, const std::vector<Dataset>& ds, const Vector& x0,
                                          const SynthesisSettings& s) {
    const Weights w = make_weights(e.Q, e.R);
    const ConstraintRows rows = e.rows();
    if (e.mode == Mode::lure) {
        return synthesize_lure(ds.at(0), w, rows, x0, *e.H, *e.beta, s, std::get<LurePlant>(e.truth).gamma);
    }
    if (e.mode == Mode::polytopic && ds.size() > 1) return synthesize_polytopic(ds, w, rows, x0, s);
    return synthesize_nominal(ds.at(0), w, rows, x0, s);
}

}  // namespace detail

inline ReproResult run_repro(const presets::Example& e, const ReproOptions& opt = {}) {
    ReproResult r;
    r.example = e;
    const Weights w = make_weights(e.Q, e.R);
    const ConstraintRows rows = e.rows();
    const std::size_t steps = opt.steps.value_or(e.sim_steps);

    try {
        r.datasets = generate_datasets(e, opt.seed);
    } catch (const std::exception& ex) {
        r.failed_stage = "gen";
        r.notes.push_back(std::string("gen: ") + ex.what());
        return r;
    }

    SynthesisSettings ss;
    ss.solver = opt.solver;
    ss.verify.plant = e.truth;
    ss.verify.sim_steps = steps;
    std::optional<Matrix> P;
    std::optional<double> alpha;
    if (opt.use_paper_gain) {
        r.K = e.reference_gain;
    } else {
        try {
            r.synthesis = detail::synthesize_example(e, r.datasets, e.x0, ss);
        } catch (const std::exception& ex) {
            r.failed_stage = "synth";
            r.notes.push_back(std::string("synth: ") + ex.what());
            return r;
        }
        if (!r.synthesis->controller) {
            r.failed_stage = "synth";
            for (const auto& n : r.synthesis->report.notes) r.notes.push_back("synth: " + n);
            return r;
        }
        const Controller& c = *r.synthesis->controller;
        r.K = c.K;
        P = c.P;
        alpha = c.alpha;
        if (!r.synthesis->report.pass()) r.notes.push_back("verify: certificate report has failures");
    }

    r.true_radii = true_closed_loop_radii(e.truth, r.K);
    r.stabilized = !r.true_radii.empty();
    for (double rho : r.true_radii) r.stabilized = r.stabilized && rho < 1.0 - kRadiusMargin;

    SimOptions so;
    if (opt.resolve_online) {
        auto last = std::make_shared<Matrix>(r.K);
        const auto datasets = r.datasets;
        SynthesisSettings rs = ss;
        so.resolve = [e, datasets, rs, last](const Vector& x, std::size_t) -> std::optional<Matrix> {
            if (x.cwiseAbs().maxCoeff() < 1e-3) return *last;
            try {
                SynthesisSettings quick = rs;
                quick.verify.sim_steps = 1;
                quick.verify.plant.reset();
                const SynthesisResult sr = detail::synthesize_example(e, datasets, x, quick);
                if (!sr.controller || sr.solution.status != SolveStatus::optimal || !sr.report.lmi_ok) return std::nullopt;
                *last = sr.controller->K;
                return *last;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };
    }
    try {
        r.sim = simulate(e.truth, r.K, e.x0, steps, w, rows, P, so);
    } catch (const std::exception& ex) {
        r.failed_stage = "sim";
        r.notes.push_back(std::string("sim: ") + ex.what());
        return r;
    }
    const SimResult& sr = *r.sim;
    r.max_abs_u = sr.inputs.cwiseAbs().maxCoeff();
    r.min_margin = sr.min_constraint_margin();
    r.constraints_ok = r.min_margin >= -kMarginTol;
    r.converged = sr.converged;
    if (!sr.resolve_failures.empty()) r.notes.push_back("sim: " + std::to_string(sr.resolve_failures.size()) + " online re-solves failed");
    if (alpha) r.cost_ok = check_against_bound(sr, *alpha).ok;
    if (P && !opt.resolve_online) r.lyapunov_ok = max_lyapunov_decrease_residual(sr) <= 1e-8 * *alpha;
    if (e.mode == Mode::lure) {
        bool ok = true;
        for (double v : sr.sector_residuals) ok = ok && v >= -1e-12;
        r.sector_ok = ok;
    }
    return r;
}

}  // namespace ddmpc
