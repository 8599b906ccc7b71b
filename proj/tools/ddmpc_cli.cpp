// ddmpc: data generation, synthesis, verification, simulation and
// reproduction of the embedded examples.
//
// Exit codes: 0 all requested certificates pass, 1 a certificate failed or
// informativity was not established, 2 bad input, 3 runtime failure.

#include "ddmpc/ddmpc.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ddmpc;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_feas, tol_gap, delta;
    std::optional<std::size_t> steps;
    std::optional<std::string> mode;
    bool use_paper_gain = false;
    bool resolve_online = false;
    std::string out = ".";
};

SolverSettings solver_settings(const Globals& g, SolverSettings s = {}) {
    if (g.tol_feas) s.feas_tol = *g.tol_feas;
    if (g.tol_gap) s.gap_tol = *g.tol_gap;
    if (g.delta) s.delta = *g.delta;
    return s;
}

class Output {
public:
    Output(const std::string& dir, std::string command, std::vector<std::string> argv) : dir_(dir) {
        fs::create_directories(dir_);
        manifest_.command = std::move(command);
        manifest_.argv = std::move(argv);
    }

    std::string write(const std::string& name, const std::string& content) {
        const std::string path = (dir_ / name).string();
        io::write_file(path, content);
        manifest_.add_output(name, content);
        return path;
    }

    void input(const std::string& path, const std::string& content) { manifest_.add_input(path, content); }
    json& parameters() { return manifest_.parameters; }

    void finish() { write_manifest(); }

private:
    void write_manifest() { io::write_file((dir_ / "manifest.json").string(), io::pretty(io::to_json(manifest_))); }

    fs::path dir_;
    io::Manifest manifest_;
};

std::string read_input(Output& out, const std::string& path) {
    const std::string content = io::read_file(path);
    out.input(path, content);
    return content;
}

json read_input_json(Output& out, const std::string& path) { return io::parse_text(read_input(out, path), path); }

std::vector<std::string> argv_vector(int argc, char** argv) { return std::vector<std::string>(argv, argv + argc); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Mode infer_mode(const Globals& g, const std::vector<Dataset>& ds, const io::ProblemSpec& spec) {
    if (g.mode) return mode_from_string(*g.mode);
    if (spec.H && spec.beta && ds.front().W_minus) return Mode::lure;
    return ds.size() > 1 ? Mode::polytopic : Mode::nominal;
}

LmiProblem build_problem(Mode mode, const std::vector<Dataset>& ds, const io::ProblemSpec& spec, const LmiOptions& lo,
                         const Vector& x0) {
    const Weights w = spec.weights();
    const ConstraintRows rows = spec.rows();
    switch (mode) {
        case Mode::nominal:
            if (ds.size() != 1) throw std::invalid_argument("nominal mode takes exactly one dataset");
            return build_nominal(ds[0], w, rows, x0, lo);
        case Mode::polytopic: return build_polytopic(ds, w, rows, x0, lo);
        case Mode::lure:
            if (ds.size() != 1) throw std::invalid_argument("lure mode takes exactly one dataset");
            if (!ds[0].W_minus) throw std::invalid_argument("lure mode needs a dataset with W_minus");
            if (!spec.H || !spec.beta) throw std::invalid_argument("lure mode needs H and beta in the problem file");
            return build_lure(ds[0], w, rows, x0, *spec.H, *spec.beta, lo);
    }
    throw std::invalid_argument("unknown mode");
}

std::vector<ConsistentSet> consistent_sets(Mode mode, const std::vector<Dataset>& ds) {
    std::vector<ConsistentSet> cs;
    for (const auto& d : ds) cs.push_back(consistent_set(d, mode == Mode::lure));
    return cs;
}

void print_report(const CertificateReport& r) {
    std::cout << "  lmi residuals    " << (r.lmi_ok ? "ok" : "FAIL") << "\n";
    std::cout << "  spectral radii   " << (r.stability_ok ? "ok" : "FAIL") << " (max " << fmt(r.max_radius) << ", "
              << r.vertex_radii.size() << " closed loops)\n";
    std::cout << "  ellipsoid        " << (r.constraints_ok ? "ok" : "FAIL") << "\n";
    std::cout << "  lyapunov         " << (r.lyapunov_ok ? "ok" : "FAIL") << " (max residual " << fmt(r.max_lyapunov_residual) << ")\n";
    std::cout << "  cost bound       " << (r.cost_bound_ok ? "ok" : "FAIL") << " (J " << fmt(r.simulated_cost) << ")\n";
    if (r.min_sector_residual) std::cout << "  sector           " << (r.sector_ok ? "ok" : "FAIL") << " (min " << fmt(*r.min_sector_residual) << ")\n";
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

json dataset_params(const std::vector<Dataset>& ds) {
    json a = json::array();
    for (const auto& d : ds) a.push_back(io::digest(io::to_json(d)));
    return a;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    std::string plant;
    std::vector<double> x0;
    Eigen::Index T = 10;
    double input_bound = 1.0;
    bool zero_input = false;
    std::optional<bool> record_w;
    std::optional<int> vertex;
};

int cmd_gen(const Globals& g, const GenArgs& a, const std::vector<std::string>& argv) {
    Output out(g.out, "gen", argv);
    const Plant plant = io::plant_from(read_input_json(out, a.plant), a.plant);
    const Vector x0 = Eigen::Map<const Vector>(a.x0.data(), static_cast<Eigen::Index>(a.x0.size()));
    const std::uint64_t seed = g.seed.value_or(1);
    const bool lure = std::holds_alternative<LurePlant>(plant);
    const bool record_w = a.record_w.value_or(lure);

    std::vector<std::pair<Plant, std::optional<int>>> runs;
    if (const auto* poly = std::get_if<PolytopicPlant>(&plant)) {
        for (std::size_t j = 0; j < poly->vertices.size(); ++j) {
            if (!a.vertex || *a.vertex == static_cast<int>(j + 1)) runs.emplace_back(poly->vertices[j], static_cast<int>(j));
        }
        if (runs.empty()) throw std::invalid_argument("--vertex out of range");
    } else {
        runs.emplace_back(plant, std::nullopt);
    }

    out.parameters() = {{"plant", a.plant}, {"x0", a.x0}, {"T", a.T}, {"seed", seed}, {"input_bound", a.input_bound},
                        {"zero_input", a.zero_input}, {"record_w", record_w}};
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& [p, vertex] = runs[r];
        const std::uint64_t s = seed + r;
        const Matrix u = a.zero_input ? Matrix::Zero(input_dim(p), a.T) : excitation_inputs(input_dim(p), a.input_bound, a.T, s);
        Dataset d = run_experiment(p, x0, u, record_w);
        d.seed = s;
        d.vertex = vertex;
        d.provenance = "gen " + a.plant + (vertex ? " vertex " + std::to_string(*vertex + 1) : std::string());
        const std::string suffix = vertex ? "_v" + std::to_string(*vertex + 1) : std::string();
        out.write("dataset" + suffix + ".json", io::pretty(io::to_json(d)));
        out.write("trace" + suffix + ".csv", io::trace_csv(d));
        std::cout << "dataset" << suffix << ": n=" << d.n() << " m=" << d.m() << " p=" << d.p() << " T=" << d.T()
                  << " seed=" << s << " regressor_rank=" << regressor_rank(d) << "\n";
    }
    out.finish();
    return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
    std::vector<std::string> data;
    std::string problem;
    std::optional<std::string> plant;
    bool per_vertex_epsilon = false;
};

int cmd_synth(const Globals& g, const SynthArgs& a, const std::vector<std::string>& argv) {
    Output out(g.out, "synth", argv);
    std::vector<Dataset> ds;
    for (const auto& f : a.data) ds.push_back(io::dataset_from(read_input_json(out, f), f));
    const io::ProblemSpec spec = io::problem_from(read_input_json(out, a.problem), a.problem);
    std::optional<Plant> plant;
    if (a.plant) plant = io::plant_from(read_input_json(out, *a.plant), *a.plant);

    const Mode mode = infer_mode(g, ds, spec);
    SynthesisSettings s;
    s.solver = solver_settings(g);
    s.per_vertex_epsilon = a.per_vertex_epsilon;
    s.verify.plant = plant;
    if (g.steps) s.verify.sim_steps = *g.steps;
    if (g.seed) s.verify.seed = *g.seed;

    out.parameters() = {{"mode", to_string(mode)}, {"data", a.data}, {"problem", a.problem},
                        {"plant", a.plant ? json(*a.plant) : json(nullptr)}, {"settings", io::to_json(s.solver)},
                        {"per_vertex_epsilon", s.per_vertex_epsilon}, {"verify_seed", s.verify.seed},
                        {"verify_samples", s.verify.samples}, {"sim_steps", s.verify.sim_steps}};

    const LmiOptions lo{s.solver.delta, s.per_vertex_epsilon};
    LmiProblem problem = build_problem(mode, ds, spec, lo, spec.x0);
    const SynthesisResult r = detail::finish(std::move(problem), consistent_sets(mode, ds), spec.rows(), spec.weights(),
                                             spec.x0, s, mode == Mode::lure ? spec.H : std::nullopt,
                                             mode == Mode::lure ? spec.beta : std::nullopt);

    std::cout << "mode " << to_string(mode) << ": solver " << to_string(r.solution.status) << " after "
              << r.solution.iterations << " iterations";
    if (!r.solution.message.empty()) std::cout << " (" << r.solution.message << ")";
    std::cout << "\n";
    json report = io::to_json(r.report);
    report["solution"] = io::to_json(r.solution);
    report["established"] = r.established();
    if (!r.controller) {
        out.write("report.json", io::pretty(report));
        out.finish();
        std::cout << "informativity not established\n";
        for (const auto& n : r.report.notes) std::cout << "  " << n << "\n";
        if (r.solution.phase1_value) std::cout << "  phase-1 value " << fmt(*r.solution.phase1_value) << "\n";
        return kExitCertificate;
    }
    io::ControllerFile cf;
    cf.controller = *r.controller;
    cf.settings = s.solver;
    cf.settings_digest = io::digest(io::to_json(s.solver));
    cf.dataset_digests = dataset_params(ds).get<std::vector<std::string>>();
    cf.problem = spec;
    out.write("controller.json", io::pretty(io::to_json(cf)));
    out.write("report.json", io::pretty(report));
    out.finish();

    std::cout << "alpha " << fmt(cf.controller.alpha) << "  K " << cf.controller.K.format(Eigen::IOFormat(6, 0, ", ", "; ", "", "", "[", "]")) << "\n";
    print_report(r.report);
    std::cout << (r.established() ? "established\n" : "informativity not established\n");
    return r.established() ? kExitOk : kExitCertificate;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string controller;
    std::vector<std::string> data;
    std::optional<std::string> problem;
    std::optional<std::string> plant;
};

int cmd_verify(const Globals& g, const VerifyArgs& a, const std::vector<std::string>& argv) {
    Output out(g.out, "verify", argv);
    const io::ControllerFile cf = io::controller_from(read_input_json(out, a.controller), a.controller);
    std::vector<Dataset> ds;
    for (const auto& f : a.data) ds.push_back(io::dataset_from(read_input_json(out, f), f));
    std::optional<io::ProblemSpec> spec = cf.problem;
    if (a.problem) spec = io::problem_from(read_input_json(out, *a.problem), *a.problem);
    if (!spec) throw io::ParseError(a.controller + ": no problem section; pass --problem");
    std::optional<Plant> plant;
    if (a.plant) plant = io::plant_from(read_input_json(out, *a.plant), *a.plant);

    const Controller& c = cf.controller;
    const Mode mode = g.mode ? mode_from_string(*g.mode) : c.mode;
    const SolverSettings settings = solver_settings(g, cf.settings);
    VerifyOptions vo;
    vo.plant = plant;
    if (g.steps) vo.sim_steps = *g.steps;
    if (g.seed) vo.seed = *g.seed;
    const LmiOptions lo{settings.delta, !c.raw.vertex_epsilon.empty()};
    const LmiProblem problem = build_problem(mode, ds, *spec, lo, c.x0);
    out.parameters() = {{"mode", to_string(mode)}, {"controller", a.controller}, {"data", a.data},
                        {"delta", settings.delta}, {"verify_seed", vo.seed}, {"sim_steps", vo.sim_steps}};

    std::vector<std::string> mismatched;
    const auto digests = dataset_params(ds).get<std::vector<std::string>>();
    for (const auto& d : digests) {
        if (!cf.dataset_digests.empty() && std::find(cf.dataset_digests.begin(), cf.dataset_digests.end(), d) == cf.dataset_digests.end()) {
            mismatched.push_back(d);
        }
    }

    CertificateReport rep = verify_certificate(c, problem, consistent_sets(mode, ds), spec->rows(), spec->weights(), vo);
    for (const auto& d : mismatched) rep.notes.push_back("dataset digest " + d + " is not among the controller's synthesis datasets");
    out.write("report.json", io::pretty(io::to_json(rep)));
    out.finish();
    print_report(rep);
    std::cout << (rep.pass() ? "certificate pass\n" : "certificate FAIL\n");
    return rep.pass() ? kExitOk : kExitCertificate;
}

// ---- sim -------------------------------------------------------------------

struct SimArgs {
    std::string controller;
    std::string plant;
    std::vector<double> x0;
    std::vector<std::string> data;  // needed by --resolve-online
    std::optional<std::string> problem;
};

int cmd_sim(const Globals& g, const SimArgs& a, const std::vector<std::string>& argv) {
    Output out(g.out, "sim", argv);
    const io::ControllerFile cf = io::controller_from(read_input_json(out, a.controller), a.controller);
    const Plant plant = io::plant_from(read_input_json(out, a.plant), a.plant);
    std::optional<io::ProblemSpec> spec = cf.problem;
    if (a.problem) spec = io::problem_from(read_input_json(out, *a.problem), *a.problem);
    if (!spec) throw io::ParseError(a.controller + ": no problem section; pass --problem");
    const Controller& c = cf.controller;
    const Eigen::Index n = state_dim(plant), m = input_dim(plant);
    if (c.K.rows() != m || c.K.cols() != n) {
        throw DimensionError("controller gain is " + shape_str(c.K) + " but the plant needs " + std::to_string(m) + "x" + std::to_string(n));
    }
    const Vector x0 = a.x0.empty() ? c.x0 : Vector(Eigen::Map<const Vector>(a.x0.data(), static_cast<Eigen::Index>(a.x0.size())));
    if (x0.size() != n) throw DimensionError("x0 has length " + std::to_string(x0.size()) + ", plant has n = " + std::to_string(n));
    const std::size_t steps = g.steps.value_or(2000);

    SimOptions so;
    std::vector<Dataset> ds;
    for (const auto& f : a.data) ds.push_back(io::dataset_from(read_input_json(out, f), f));
    if (g.resolve_online) {
        if (ds.empty()) throw std::invalid_argument("--resolve-online needs --data");
        auto last = std::make_shared<Matrix>(c.K);
        const SolverSettings settings = solver_settings(g, cf.settings);
        const io::ProblemSpec sp = *spec;
        const Mode mode = c.mode;
        so.resolve = [ds, sp, settings, mode, last](const Vector& x, std::size_t) -> std::optional<Matrix> {
            if (x.cwiseAbs().maxCoeff() < 1e-3) return *last;
            try {
                const LmiProblem p = build_problem(mode, ds, sp, LmiOptions{settings.delta, false}, x);
                auto [sol, dp] = solve(p, settings);
                if (!dp) return std::nullopt;
                *last = recover_gain(*dp).K;
                return *last;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };
    }
    out.parameters() = {{"controller", a.controller}, {"plant", a.plant}, {"x0", io::to_json(x0)}, {"steps", steps},
                        {"resolve_online", g.resolve_online}};

    const std::optional<Matrix> P = x0.isApprox(c.x0) && !g.resolve_online ? std::optional<Matrix>(c.P) : std::nullopt;
    const SimResult sr = simulate(plant, c.K, x0, steps, spec->weights(), spec->rows(), c.P, so);
    out.write("trajectory.csv", io::trajectory_csv(sr));
    out.write("trajectory.svg", io::render_svg(sr, "closed loop from " + a.controller));
    out.finish();

    const BoundCheck bc = check_against_bound(sr, c.alpha);
    const double margin = sr.min_constraint_margin();
    const bool constraints_ok = margin >= -1e-8;
    const bool lyap_ok = !P || max_lyapunov_decrease_residual(sr) <= 1e-8 * c.alpha;
    std::cout << "J " << fmt(sr.total_cost) << "  alpha " << fmt(c.alpha) << "  slack " << fmt(bc.slack)
              << "  convergence_step " << (sr.convergence_step ? std::to_string(*sr.convergence_step) : std::string("none"))
              << "  min_margin " << (std::isfinite(margin) ? fmt(margin) : std::string("none")) << "\n";
    if (!sr.resolve_failures.empty()) std::cout << "  " << sr.resolve_failures.size() << " online re-solves failed; previous gain kept\n";
    const bool ok = constraints_ok && lyap_ok && (!P || bc.ok);
    return ok ? kExitOk : kExitCertificate;
}

// ---- repro -----------------------------------------------------------------

io::ProblemSpec problem_spec(const presets::Example& e) {
    io::ProblemSpec s;
    s.Q = e.Q;
    s.R = e.R;
    s.state_rows = e.state_rows;
    s.input_rows = e.input_rows;
    s.x0 = e.x0;
    s.H = e.H;
    s.beta = e.beta;
    return s;
}

std::string yes(bool b) { return b ? "yes" : "NO"; }

int cmd_repro(const Globals& g, const std::string& which, const std::vector<std::string>& argv) {
    const presets::Example e = presets::example(which);
    Output out(g.out, "repro", argv);
    ReproOptions ro;
    ro.seed = g.seed;
    ro.solver = solver_settings(g);
    ro.steps = g.steps;
    ro.use_paper_gain = g.use_paper_gain;
    ro.resolve_online = g.resolve_online;

    const ReproResult r = run_repro(e, ro);
    json seeds = json::array();
    for (const auto& d : r.datasets) seeds.push_back(d.seed ? json(*d.seed) : json(nullptr));
    out.parameters() = {{"example", e.name}, {"preset_version", presets::kPresetVersion}, {"seeds", seeds},
                        {"settings", io::to_json(ro.solver)}, {"steps", ro.steps.value_or(e.sim_steps)},
                        {"use_paper_gain", ro.use_paper_gain}, {"resolve_online", ro.resolve_online}};

    out.write("plant.json", io::pretty(io::to_json(e.truth)));
    out.write("problem.json", io::pretty(io::to_json(problem_spec(e))));
    for (std::size_t j = 0; j < r.datasets.size(); ++j) {
        const std::string suffix = r.datasets.size() > 1 ? "_v" + std::to_string(j + 1) : std::string();
        out.write("dataset" + suffix + ".json", io::pretty(io::to_json(r.datasets[j])));
        out.write("trace" + suffix + ".csv", io::trace_csv(r.datasets[j]));
    }
    if (r.synthesis) {
        json report = io::to_json(r.synthesis->report);
        report["solution"] = io::to_json(r.synthesis->solution);
        report["established"] = r.synthesis->established();
        out.write("report.json", io::pretty(report));
        if (r.synthesis->controller) {
            io::ControllerFile cf;
            cf.controller = *r.synthesis->controller;
            cf.settings = ro.solver;
            cf.settings_digest = io::digest(io::to_json(ro.solver));
            cf.dataset_digests = dataset_params(r.datasets).get<std::vector<std::string>>();
            cf.problem = problem_spec(e);
            out.write("controller.json", io::pretty(io::to_json(cf)));
        }
    }
    if (r.sim) {
        out.write("trajectory.csv", io::trajectory_csv(*r.sim));
        const double ub = e.input_rows.rows() > 0 ? 1.0 / e.input_rows.cwiseAbs().maxCoeff() : 0.0;
        out.write("trajectory.svg", io::render_svg(*r.sim, "example " + e.name, 200, ub > 0 ? std::optional<double>(ub) : std::nullopt));
    }

    json summary{{"example", e.name}, {"pass", r.pass()}, {"failed_stage", r.failed_stage},
                 {"gain_source", ro.use_paper_gain ? "paper" : "synthesized"}, {"K", io::to_json(r.K)},
                 {"true_closed_loop_radii", r.true_radii}};
    json claims{{"stabilized", r.stabilized}, {"constraints_satisfied", r.constraints_ok}, {"converged", r.converged}};
    claims["cost_within_alpha"] = r.cost_ok ? json(*r.cost_ok) : json(nullptr);
    claims["lyapunov_decrease"] = r.lyapunov_ok ? json(*r.lyapunov_ok) : json(nullptr);
    claims["sector_residual_nonnegative"] = r.sector_ok ? json(*r.sector_ok) : json(nullptr);
    summary["claims"] = claims;
    if (r.synthesis && r.synthesis->controller) summary["alpha"] = r.synthesis->controller->alpha;
    if (r.sim) {
        summary["J"] = r.sim->total_cost;
        summary["max_abs_u"] = r.max_abs_u;
        summary["min_constraint_margin"] = r.min_margin;
        summary["convergence_step"] = r.sim->convergence_step ? json(*r.sim->convergence_step) : json(nullptr);
    }
    summary["notes"] = r.notes;
    out.write("summary.json", io::pretty(summary));
    out.finish();

    std::cout << "example " << e.name << " (" << (ro.use_paper_gain ? "paper gain" : "synthesized gain") << ")\n";
    if (!r.failed_stage.empty()) {
        std::cout << "[" << r.failed_stage << "] stage failed\n";
        for (const auto& n : r.notes) std::cout << "  " << n << "\n";
        return kExitCertificate;
    }
    if (r.synthesis) {
        std::cout << "  solver " << to_string(r.synthesis->solution.status) << ", alpha " << fmt(r.synthesis->controller->alpha) << "\n";
        print_report(r.synthesis->report);
    }
    std::cout << "  K " << r.K.format(Eigen::IOFormat(6, 0, ", ", "; ", "", "", "[", "]")) << "\n  true closed-loop radii";
    for (double rho : r.true_radii) std::cout << " " << fmt(rho);
    std::cout << "\n  stabilized " << yes(r.stabilized) << ", constraints satisfied " << yes(r.constraints_ok)
              << " (max |u| " << fmt(r.max_abs_u) << "), converged " << yes(r.converged);
    if (r.sim && r.sim->convergence_step) std::cout << " at step " << *r.sim->convergence_step;
    if (r.cost_ok) std::cout << ", J " << fmt(r.sim->total_cost) << " <= alpha " << yes(*r.cost_ok);
    if (r.lyapunov_ok) std::cout << ", Lyapunov decrease " << yes(*r.lyapunov_ok);
    if (r.sector_ok) std::cout << ", sector residual " << yes(*r.sector_ok);
    std::cout << "\n";
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    std::cout << (r.pass() ? "PASS\n" : "FAIL\n");
    return r.pass() ? kExitOk : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven robust MPC synthesis and certificate verification"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--tol-feas", g.tol_feas, "solver feasibility tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-gap", g.tol_gap, "solver relative gap tolerance")->check(CLI::PositiveNumber);
    app.add_option("--delta", g.delta, "strictness margin")->check(CLI::PositiveNumber);
    app.add_option("--steps", g.steps, "simulation steps")->check(CLI::PositiveNumber);
    app.add_option("--mode", g.mode, "synthesis mode")->check(CLI::IsMember({"nominal", "polytopic", "lure"}));
    app.add_flag("--use-paper-gain", g.use_paper_gain, "repro: verify the published gain instead of synthesizing");
    app.add_flag("--resolve-online", g.resolve_online, "re-synthesize at every simulated state");
    app.add_option("--out", g.out, "output directory");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "run an open-loop experiment and write a dataset");
    gen->add_option("--plant", ga.plant, "plant file")->required();
    gen->add_option("--x0", ga.x0, "initial state, comma separated")->required()->delimiter(',');
    gen->add_option("-T,--length", ga.T, "experiment length")->check(CLI::PositiveNumber);
    gen->add_option("--input-bound", ga.input_bound, "uniform excitation amplitude")->check(CLI::PositiveNumber);
    gen->add_flag("--zero-input", ga.zero_input, "apply u = 0 instead of random excitation");
    gen->add_option("--record-w", ga.record_w, "record w = gamma(Hx) (default: on for Lur'e plants)");
    gen->add_option("--vertex", ga.vertex, "polytopic plants: run only this vertex (1-based)");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "synthesize a controller from data");
    synth->add_option("--data", sa.data, "dataset file (repeat per vertex)")->required();
    synth->add_option("--problem", sa.problem, "weights, constraints and x0")->required();
    synth->add_option("--plant", sa.plant, "plant to simulate during verification");
    synth->add_flag("--per-vertex-epsilon", sa.per_vertex_epsilon, "one multiplier per vertex");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "re-verify a controller against data");
    verify->add_option("--controller", va.controller, "controller file")->required();
    verify->add_option("--data", va.data, "dataset file (repeat per vertex)")->required();
    verify->add_option("--problem", va.problem, "override the controller's problem section");
    verify->add_option("--plant", va.plant, "plant to simulate");

    SimArgs sm;
    auto* sim = app.add_subcommand("sim", "simulate a controller in closed loop");
    sim->add_option("--controller", sm.controller, "controller file")->required();
    sim->add_option("--plant", sm.plant, "plant file")->required();
    sim->add_option("--x0", sm.x0, "initial state (default: the controller's)")->delimiter(',');
    sim->add_option("--data", sm.data, "datasets for --resolve-online");
    sim->add_option("--problem", sm.problem, "override the controller's problem section");

    std::string which;
    auto* repro = app.add_subcommand("repro", "reproduce an embedded example end to end");
    repro->add_option("example", which, "one | two")->required()->check(CLI::IsMember({"one", "two"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    const auto args = argv_vector(argc, argv);
    try {
        if (*gen) return cmd_gen(g, ga, args);
        if (*synth) return cmd_synth(g, sa, args);
        if (*verify) return cmd_verify(g, va, args);
        if (*sim) return cmd_sim(g, sm, args);
        if (*repro) return cmd_repro(g, which, args);
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ExperimentOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitInput;
}
