#pragma once

// File formats: JSON documents for plants, datasets, problem settings,
// controllers, reports and run manifests; CSV for data traces and closed-loop
// trajectories; a static SVG rendering of a trajectory.

#include "ddmpc/synthesis.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace ddmpc::io {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

// ---- digests ---------------------------------------------------------------

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

inline std::string digest(const json& j) { return digest(j.dump()); }

// ---- field access with diagnostics -----------------------------------------

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

inline std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string, got " + std::string(j.type_name()));
    return j.get<std::string>();
}

inline json parse_text(const std::string& s, const std::string& source) {
    try {
        return json::parse(s);
    } catch (const json::parse_error& e) {
        // nlohmann reports "line L, column C" in its message.
        throw ParseError(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json(const std::string& path) { return parse_text(read_file(path), path); }

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::string pretty(const json& j) { return j.dump(2) + "\n"; }

// ---- matrices --------------------------------------------------------------

/// {"rows": r, "cols": c, "data": [row-major]}
inline json to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Matrix matrix_from(const json& j, const std::string& where) {
    const json& r = field(j, "rows", where);
    const json& c = field(j, "cols", where);
    if (!r.is_number_integer() || !c.is_number_integer() || r.get<long long>() < 0 || c.get<long long>() < 0) {
        throw ParseError(where + ": rows/cols must be non-negative integers");
    }
    const auto rows = r.get<Eigen::Index>(), cols = c.get<Eigen::Index>();
    const json& data = field(j, "data", where);
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw ParseError(where + ": data must hold " + std::to_string(rows * cols) + " numbers");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto idx = static_cast<std::size_t>(i * cols + k);
            m(i, k) = number(data[idx], where + ".data[" + std::to_string(idx) + "]");
        }
    }
    return m;
}

inline Vector vector_from(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

inline Matrix matrix_field(const json& j, const std::string& key, const std::string& where) {
    return matrix_from(field(j, key, where), where + "." + key);
}

// ---- plants ----------------------------------------------------------------

inline json to_json(const Nonlinearity& g) {
    json j{{"name", g.name()}};
    if (g.kind() == Nonlinearity::Kind::saturation || g.kind() == Nonlinearity::Kind::linear) j["param"] = g.param();
    if (g.kind() == Nonlinearity::Kind::tabulated) {
        j["z"] = g.knots_z();
        j["gamma"] = g.knots_gamma();
    }
    return j;
}

inline Nonlinearity nonlinearity_from(const json& j, const std::string& where) {
    const std::string name = text(field(j, "name", where), where + ".name");
    try {
        if (name == "tabulated") {
            return Nonlinearity::tabulated(field(j, "z", where).get<std::vector<double>>(),
                                           field(j, "gamma", where).get<std::vector<double>>());
        }
        const double param = j.contains("param") ? number(j["param"], where + ".param") : 0.0;
        return Nonlinearity::from_name(name, param);
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline json lti_json(const LtiPlant& p) { return json{{"A", to_json(p.A)}, {"B", to_json(p.B)}}; }

inline json to_json(const Plant& plant) {
    json j{{"format", "ddmpc-plant"}, {"version", kFormatVersion}};
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LtiPlant>) {
                j["kind"] = "lti";
                j["A"] = to_json(p.A);
                j["B"] = to_json(p.B);
            } else if constexpr (std::is_same_v<T, PolytopicPlant>) {
                j["kind"] = "polytopic";
                j["vertices"] = json::array();
                for (const auto& v : p.vertices) j["vertices"].push_back(lti_json(v));
                j["mixing_weights"] = to_json(p.mixing_weights);
            } else {
                j["kind"] = "lure";
                j["A"] = to_json(p.A);
                j["B"] = to_json(p.B);
                j["E"] = to_json(p.E);
                j["H"] = to_json(p.H);
                j["nonlinearity"] = to_json(p.gamma);
                j["beta"] = to_json(p.beta);
            }
        },
        plant);
    return j;
}

inline Plant plant_from(const json& j, const std::string& where = "plant") {
    const std::string kind = text(field(j, "kind", where), where + ".kind");
    try {
        if (kind == "lti") {
            LtiPlant p(matrix_field(j, "A", where), matrix_field(j, "B", where));
            p.validate();
            return p;
        }
        if (kind == "polytopic") {
            const json& vs = field(j, "vertices", where);
            if (!vs.is_array() || vs.empty()) throw ParseError(where + ".vertices: expected a non-empty array");
            PolytopicPlant p;
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const std::string w = where + ".vertices[" + std::to_string(i) + "]";
                p.vertices.emplace_back(matrix_field(vs[i], "A", w), matrix_field(vs[i], "B", w));
            }
            p.mixing_weights = j.contains("mixing_weights")
                                   ? vector_from(j["mixing_weights"], where + ".mixing_weights")
                                   : Vector::Constant(static_cast<Eigen::Index>(vs.size()), 1.0 / static_cast<double>(vs.size()));
            p.validate();
            return p;
        }
        if (kind == "lure") {
            LurePlant p;
            p.A = matrix_field(j, "A", where);
            p.B = matrix_field(j, "B", where);
            p.E = matrix_field(j, "E", where);
            p.H = matrix_field(j, "H", where);
            p.gamma = nonlinearity_from(field(j, "nonlinearity", where), where + ".nonlinearity");
            p.beta = matrix_field(j, "beta", where);
            p.validate();
            return p;
        }
    } catch (const DimensionError& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ".kind: unknown plant kind '" + kind + "' (expected lti|polytopic|lure)");
}

// ---- datasets --------------------------------------------------------------

inline json to_json(const Dataset& d) {
    json j{{"format", "ddmpc-dataset"}, {"version", kFormatVersion},
           {"n", d.n()}, {"m", d.m()}, {"p", d.p()}, {"T", d.T()}};
    j["seed"] = d.seed ? json(*d.seed) : json(nullptr);
    j["provenance"] = d.provenance;
    j["vertex"] = d.vertex ? json(*d.vertex) : json(nullptr);
    j["U_minus"] = to_json(d.U_minus);
    j["X"] = to_json(d.X);
    j["W_minus"] = d.W_minus ? to_json(*d.W_minus) : json(nullptr);
    return j;
}

inline Dataset dataset_from(const json& j, const std::string& where = "dataset") {
    Dataset d;
    d.U_minus = matrix_field(j, "U_minus", where);
    d.X = matrix_field(j, "X", where);
    if (j.contains("W_minus") && !j["W_minus"].is_null()) d.W_minus = matrix_from(j["W_minus"], where + ".W_minus");
    if (j.contains("seed") && !j["seed"].is_null()) {
        if (!j["seed"].is_number_unsigned()) throw ParseError(where + ".seed: expected a non-negative integer");
        d.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("provenance")) d.provenance = text(j["provenance"], where + ".provenance");
    if (j.contains("vertex") && !j["vertex"].is_null()) d.vertex = j["vertex"].get<int>();
    try {
        d.validate();
    } catch (const DimensionError& e) {
        throw ParseError(where + ": " + e.what());
    }
    for (const char* key : {"n", "m", "p", "T"}) {
        if (!j.contains(key)) continue;
        const long long want = key[0] == 'n' ? d.n() : key[0] == 'm' ? d.m() : key[0] == 'p' ? d.p() : d.T();
        if (!j[key].is_number_integer() || j[key].get<long long>() != want) {
            throw ParseError(where + "." + key + ": declared value disagrees with the matrices (" + std::to_string(want) + ")");
        }
    }
    return d;
}

/// One row per step: k, u(k), x(k), w(k); the final row carries x(T) only.
inline std::string trace_csv(const Dataset& d) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "k";
    for (Eigen::Index i = 0; i < d.m(); ++i) os << ",u" << i + 1;
    for (Eigen::Index i = 0; i < d.n(); ++i) os << ",x" << i + 1;
    for (Eigen::Index i = 0; i < d.p(); ++i) os << ",w" << i + 1;
    os << "\n";
    for (Eigen::Index k = 0; k <= d.T(); ++k) {
        os << k;
        for (Eigen::Index i = 0; i < d.m(); ++i) {
            os << ",";
            if (k < d.T()) os << d.U_minus(i, k);
        }
        for (Eigen::Index i = 0; i < d.n(); ++i) os << "," << d.X(i, k);
        for (Eigen::Index i = 0; i < d.p(); ++i) {
            os << ",";
            if (k < d.T()) os << (*d.W_minus)(i, k);
        }
        os << "\n";
    }
    return os.str();
}

// ---- problem settings ------------------------------------------------------

/// Everything besides the data that the LMI builders need.
struct ProblemSpec {
    Matrix Q, R;
    Matrix state_rows, input_rows;  // rows of c x <= 1 and d u <= 1
    Vector x0;
    std::optional<Matrix> H, beta;  // Lur'e only

    Weights weights() const { return make_weights(Q, R); }
    ConstraintRows rows() const { return make_constraint_rows(state_rows, input_rows, Q.rows(), R.rows()); }
};

inline json to_json(const ProblemSpec& s) {
    json j{{"format", "ddmpc-problem"}, {"version", kFormatVersion},
           {"Q", to_json(s.Q)}, {"R", to_json(s.R)},
           {"state_rows", to_json(s.state_rows)}, {"input_rows", to_json(s.input_rows)},
           {"x0", to_json(s.x0)}};
    j["H"] = s.H ? to_json(*s.H) : json(nullptr);
    j["beta"] = s.beta ? to_json(*s.beta) : json(nullptr);
    return j;
}

inline ProblemSpec problem_from(const json& j, const std::string& where = "problem") {
    ProblemSpec s;
    s.Q = matrix_field(j, "Q", where);
    s.R = matrix_field(j, "R", where);
    const Eigen::Index n = s.Q.rows(), m = s.R.rows();
    s.state_rows = j.contains("state_rows") ? matrix_from(j["state_rows"], where + ".state_rows") : Matrix(0, n);
    s.input_rows = j.contains("input_rows") ? matrix_from(j["input_rows"], where + ".input_rows") : Matrix(0, m);
    if (s.state_rows.rows() == 0) s.state_rows.resize(0, n);
    if (s.input_rows.rows() == 0) s.input_rows.resize(0, m);
    s.x0 = vector_from(field(j, "x0", where), where + ".x0");
    if (j.contains("H") && !j["H"].is_null()) s.H = matrix_from(j["H"], where + ".H");
    if (j.contains("beta") && !j["beta"].is_null()) s.beta = matrix_from(j["beta"], where + ".beta");
    if (s.x0.size() != n) throw ParseError(where + ".x0: length " + std::to_string(s.x0.size()) + " does not match Q (" + std::to_string(n) + ")");
    return s;
}

// ---- solver settings -------------------------------------------------------

inline json to_json(const SolverSettings& s) {
    return json{{"feas_tol", s.feas_tol}, {"gap_tol", s.gap_tol}, {"max_iters", s.max_iters},
                {"delta", s.delta}, {"box_radius", s.box_radius}, {"epsilon_cap", s.epsilon_cap},
                {"precondition", s.precondition}};
}

inline SolverSettings solver_settings_from(const json& j, const std::string& where = "settings") {
    SolverSettings s;
    if (j.contains("feas_tol")) s.feas_tol = number(j["feas_tol"], where + ".feas_tol");
    if (j.contains("gap_tol")) s.gap_tol = number(j["gap_tol"], where + ".gap_tol");
    if (j.contains("max_iters")) s.max_iters = j["max_iters"].get<int>();
    if (j.contains("delta")) s.delta = number(j["delta"], where + ".delta");
    if (j.contains("box_radius")) s.box_radius = number(j["box_radius"], where + ".box_radius");
    if (j.contains("epsilon_cap")) s.epsilon_cap = number(j["epsilon_cap"], where + ".epsilon_cap");
    if (j.contains("precondition")) s.precondition = j["precondition"].get<bool>();
    return s;
}

// ---- controllers -----------------------------------------------------------

inline json to_json(const DecisionPoint& dp) {
    json j{{"N", to_json(dp.N)}, {"L", to_json(dp.L)}, {"alpha", dp.alpha}, {"eta", dp.eta}, {"epsilon", dp.epsilon}};
    if (!dp.vertex_epsilon.empty()) j["vertex_epsilon"] = dp.vertex_epsilon;
    return j;
}

inline DecisionPoint decision_point_from(const json& j, const std::string& where) {
    DecisionPoint dp;
    dp.N = matrix_field(j, "N", where);
    dp.L = matrix_field(j, "L", where);
    dp.alpha = number(field(j, "alpha", where), where + ".alpha");
    dp.eta = number(field(j, "eta", where), where + ".eta");
    dp.epsilon = number(field(j, "epsilon", where), where + ".epsilon");
    if (j.contains("vertex_epsilon")) dp.vertex_epsilon = j["vertex_epsilon"].get<std::vector<double>>();
    return dp;
}

struct ControllerFile {
    Controller controller;
    SolverSettings settings;
    std::string settings_digest;
    std::vector<std::string> dataset_digests;
    std::optional<ProblemSpec> problem;  // weights and constraints used for synthesis
};

inline json to_json(const ControllerFile& f) {
    const Controller& c = f.controller;
    json j{{"format", "ddmpc-controller"}, {"version", kFormatVersion}, {"mode", to_string(c.mode)},
           {"K", to_json(c.K)}, {"P", to_json(c.P)}, {"alpha", c.alpha}, {"x0", to_json(c.x0)},
           {"raw", to_json(c.raw)}};
    j["H"] = c.H ? to_json(*c.H) : json(nullptr);
    j["beta"] = c.beta ? to_json(*c.beta) : json(nullptr);
    j["settings"] = to_json(f.settings);
    j["settings_digest"] = f.settings_digest.empty() ? digest(to_json(f.settings)) : f.settings_digest;
    j["dataset_digests"] = f.dataset_digests;
    j["problem"] = f.problem ? to_json(*f.problem) : json(nullptr);
    return j;
}

inline ControllerFile controller_from(const json& j, const std::string& where = "controller") {
    ControllerFile f;
    Controller& c = f.controller;
    try {
        c.mode = mode_from_string(text(field(j, "mode", where), where + ".mode"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ".mode: " + e.what());
    }
    c.K = matrix_field(j, "K", where);
    c.P = matrix_field(j, "P", where);
    c.alpha = number(field(j, "alpha", where), where + ".alpha");
    c.x0 = vector_from(field(j, "x0", where), where + ".x0");
    c.raw = decision_point_from(field(j, "raw", where), where + ".raw");
    if (j.contains("H") && !j["H"].is_null()) c.H = matrix_from(j["H"], where + ".H");
    if (j.contains("beta") && !j["beta"].is_null()) c.beta = matrix_from(j["beta"], where + ".beta");
    if (j.contains("settings")) f.settings = solver_settings_from(j["settings"], where + ".settings");
    if (j.contains("settings_digest")) f.settings_digest = text(j["settings_digest"], where + ".settings_digest");
    if (j.contains("dataset_digests")) f.dataset_digests = j["dataset_digests"].get<std::vector<std::string>>();
    if (j.contains("problem") && !j["problem"].is_null()) f.problem = problem_from(j["problem"], where + ".problem");
    if (c.K.cols() != c.P.rows() || c.P.rows() != c.P.cols() || c.x0.size() != c.P.rows()) {
        throw ParseError(where + ": K, P and x0 dimensions disagree");
    }
    return f;
}

// ---- reports ---------------------------------------------------------------

inline json to_json(const Solution& s) {
    json j{{"status", to_string(s.status)}, {"iterations", s.iterations}, {"message", s.message}};
    j["objective"] = std::isfinite(s.objective_value) ? json(s.objective_value) : json(nullptr);
    j["gap"] = std::isfinite(s.gap) ? json(s.gap) : json(nullptr);
    j["phase1_value"] = s.phase1_value ? json(*s.phase1_value) : json(nullptr);
    json res = json::array();
    for (const auto& r : s.residuals) res.push_back({{"name", r.name}, {"min_eig", r.min_eig}});
    j["residuals"] = std::move(res);
    return j;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const CertificateReport& r) {
    json lmi = json::array();
    for (const auto& b : r.lmi_residuals) lmi.push_back({{"name", b.name}, {"min_eig", b.min_eig}});
    json j{{"format", "ddmpc-report"}, {"version", kFormatVersion}, {"pass", r.pass()},
           {"lmi_ok", r.lmi_ok}, {"lmi_residuals", std::move(lmi)},
           {"stability_ok", r.stability_ok}, {"max_radius", r.max_radius}, {"vertex_radii", r.vertex_radii},
           {"constraints_ok", r.constraints_ok}, {"ellipsoid_margins", r.ellipsoid_margins},
           {"lyapunov_ok", r.lyapunov_ok}, {"max_lyapunov_residual", finite_or_null(r.max_lyapunov_residual)},
           {"cost_bound_ok", r.cost_bound_ok}, {"simulated_cost", r.simulated_cost},
           {"cost_slack", finite_or_null(r.cost_slack)},
           {"sector_ok", r.sector_ok}, {"simulations", r.simulations}, {"notes", r.notes}};
    j["min_sector_residual"] = r.min_sector_residual ? json(*r.min_sector_residual) : json(nullptr);
    return j;
}

// ---- trajectories ----------------------------------------------------------

/// One row per step: k, x(k), u(k), V(k), stage cost, min constraint margin.
/// The final row (k = steps) carries x and V only.
inline std::string trajectory_csv(const SimResult& sr) {
    const Eigen::Index n = sr.states.rows(), m = sr.inputs.rows();
    const std::size_t steps = sr.steps();
    std::ostringstream os;
    os << std::setprecision(17);
    os << "k";
    for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
    for (Eigen::Index i = 0; i < m; ++i) os << ",u" << i + 1;
    os << ",V,stage_cost,min_margin\n";
    for (std::size_t k = 0; k <= steps; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        os << k;
        for (Eigen::Index i = 0; i < n; ++i) os << "," << sr.states(i, kk);
        for (Eigen::Index i = 0; i < m; ++i) {
            os << ",";
            if (k < steps) os << sr.inputs(i, kk);
        }
        os << ",";
        if (!sr.lyapunov.empty()) os << sr.lyapunov[k];
        os << ",";
        if (k < steps) os << sr.stage_costs[k];
        os << ",";
        if (k < steps && !sr.constraint_margins[k].empty()) {
            os << *std::min_element(sr.constraint_margins[k].begin(), sr.constraint_margins[k].end());
        }
        os << "\n";
    }
    return os.str();
}

namespace detail {

inline std::string polyline(const Eigen::RowVectorXd& v, double x0, double y0, double w, double h, double lo, double hi,
                            const char* color) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    const double span = hi > lo ? hi - lo : 1.0;
    const Eigen::Index count = v.size();
    for (Eigen::Index k = 0; k < count; ++k) {
        const double px = x0 + w * (count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0);
        const double py = y0 + h * (1.0 - (v(k) - lo) / span);
        os << px << "," << py << " ";
    }
    os << "\"/>\n";
    return os.str();
}

inline std::string panel(const Matrix& rows, const std::string& label, double y0, double w, double h,
                         const std::optional<double>& bound) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    double lo = rows.size() ? rows.minCoeff() : -1.0, hi = rows.size() ? rows.maxCoeff() : 1.0;
    if (bound) {
        lo = std::min(lo, -*bound);
        hi = std::max(hi, *bound);
    }
    const double pad = 0.05 * std::max(hi - lo, 1e-12);
    lo -= pad;
    hi += pad;
    const double x0 = 60.0;
    std::ostringstream os;
    os << std::setprecision(4);
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"8\" y=\"" << y0 + 14 << "\" font-size=\"12\">" << label << "</text>\n";
    os << "<text x=\"8\" y=\"" << y0 + h << "\" font-size=\"10\">" << lo << "</text>\n";
    os << "<text x=\"8\" y=\"" << y0 + 28 << "\" font-size=\"10\">" << hi << "</text>\n";
    if (bound) {
        for (double b : {*bound, -*bound}) {
            const double py = y0 + h * (1.0 - (b - lo) / (hi - lo));
            os << "<line x1=\"" << x0 << "\" x2=\"" << x0 + w << "\" y1=\"" << py << "\" y2=\"" << py
               << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
        }
    }
    for (Eigen::Index i = 0; i < rows.rows(); ++i) os << polyline(rows.row(i), x0, y0, w, h, lo, hi, colors[i % 6]);
    return os.str();
}

}  // namespace detail

/// Static two-panel rendering (states, inputs) of the first `horizon` steps.
inline std::string render_svg(const SimResult& sr, const std::string& title, std::size_t horizon = 200,
                              std::optional<double> input_bound = std::nullopt) {
    const auto steps = static_cast<Eigen::Index>(std::min(horizon, sr.steps()));
    const double w = 620.0, h = 180.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" height=\"460\" font-family=\"sans-serif\">\n";
    os << "<text x=\"60\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    os << detail::panel(sr.states.leftCols(steps + 1), "x(k)", 35.0, w, h, std::nullopt);
    os << detail::panel(sr.inputs.leftCols(std::max<Eigen::Index>(steps, 1)), "u(k)", 250.0, w, h, input_bound);
    os << "<text x=\"60\" y=\"450\" font-size=\"11\">k = 0 .. " << steps << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

// ---- manifests -------------------------------------------------------------

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    json parameters = json::object();
    json inputs = json::object();   // path -> digest
    json outputs = json::object();  // path -> digest

    void add_input(const std::string& path, const std::string& content) { inputs[path] = digest(content); }
    void add_output(const std::string& path, const std::string& content) { outputs[path] = digest(content); }
};

inline json to_json(const Manifest& m) {
    return json{{"format", "ddmpc-manifest"}, {"version", kFormatVersion}, {"command", m.command},
                {"argv", m.argv}, {"parameters", m.parameters}, {"inputs", m.inputs}, {"outputs", m.outputs}};
}

}  // namespace ddmpc::io
