#pragma once

// Embedded parameter sets for the two reference examples: the angular
// positioning system (two-vertex polytope) and the flexible robotic arm
// (Lur'e plant with sin z + z).

#include "ddmpc/lmi.hpp"
#include "ddmpc/plants.hpp"

#include <numbers>
#include <string>

namespace ddmpc::presets {

inline constexpr int kPresetVersion = 1;

struct Example {
    std::string name;
    Mode mode = Mode::nominal;
    Plant truth;                    // plant used for simulation
    std::vector<Plant> data_plants; // one per experiment (vertex)
    Vector x0;                      // synthesis and simulation initial state
    Vector data_x0;                 // experiment initial state
    Matrix Q, R;
    Matrix state_rows, input_rows;  // "<= 1" rows
    double input_bound = 1.0;       // excitation amplitude
    Eigen::Index T = 10;
    std::vector<std::uint64_t> seeds;
    std::size_t sim_steps = 2000;
    Matrix reference_gain;
    std::optional<Matrix> H, beta;

    ConstraintRows rows() const {
        const Eigen::Index n = Q.rows(), m = R.rows();
        return make_constraint_rows(state_rows, input_rows, n, m);
    }
};

inline Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
    Matrix m(r, c);
    auto it = v.begin();
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = *it++;
    }
    return m;
}

inline constexpr double kKappa = 7.87;

inline LtiPlant angular_vertex(int j) {
    const double a22 = j == 1 ? 0.99 : 0.0;
    return LtiPlant(mat(2, 2, {1.0, 0.1, 0.0, a22}), mat(2, 1, {0.0, 0.1 * kKappa}));
}

/// Angular positioning: A(k) in Co{A1, A2}, simulated on 0.85 A1 + 0.15 A2.
inline Example example_one() {
    Example e;
    e.name = "one";
    e.mode = Mode::polytopic;
    PolytopicPlant poly{{angular_vertex(1), angular_vertex(2)}, Vector(2)};
    poly.mixing_weights << 0.85, 0.15;
    e.truth = poly;
    e.data_plants = {angular_vertex(1), angular_vertex(2)};
    e.x0 = Vector(2);
    e.x0 << 0.95, 0.0;
    e.data_x0 = e.x0;
    e.Q = Matrix::Identity(2, 2);
    e.R = Matrix::Constant(1, 1, 0.01);
    e.state_rows = Matrix(0, 2);
    e.input_rows = box_rows({{0, -1.0, 1.0}}, 1);
    e.input_bound = 1.0;
    e.T = 10;
    e.seeds = {101, 102};
    e.sim_steps = 2000;
    e.reference_gain = mat(1, 2, {-0.6489, -0.3809});
    return e;
}

inline LurePlant flexible_arm() {
    LurePlant p;
    p.A = mat(4, 4, {1.0, 0.02, 0.0, 0.0,       //
                     -0.972, 0.975, 0.972, 0.0, //
                     0.0, 0.0, 1.0, 0.02,       //
                     0.39, 0.0, -0.334, 1.0});
    p.B = mat(4, 1, {0.0, 0.432, 0.0, 0.0});
    p.E = mat(4, 1, {0.0, 0.0, 0.0, -0.0666});
    p.H = mat(1, 4, {0.0, 0.0, 1.0, 0.0});
    p.gamma = Nonlinearity::sin_plus_identity();
    p.beta = Matrix::Constant(1, 1, 2.0);
    p.validate();
    return p;
}

/// Flexible robotic arm with gamma(z) = sin z + z, beta = 2.
inline Example example_two() {
    Example e;
    e.name = "two";
    e.mode = Mode::lure;
    const LurePlant arm = flexible_arm();
    e.truth = arm;
    e.data_plants = {arm};
    e.x0 = Vector(4);
    e.x0 << 1.1, 0.2, 0.0, 0.0;
    e.data_x0 = e.x0;
    Vector qd(4);
    qd << 1.0, 0.1, 1.0, 0.1;
    e.Q = 0.1 * Matrix(qd.asDiagonal());
    e.R = Matrix::Constant(1, 1, 0.1);
    const double h = std::numbers::pi / 2.0;
    e.state_rows = box_rows({{0, -h, h}, {2, -h, h}}, 4);
    e.input_rows = box_rows({{0, -2.0, 2.0}}, 1);
    e.input_bound = 2.0;
    e.T = 50;
    e.seeds = {201};
    e.sim_steps = 2000;
    e.reference_gain = mat(1, 4, {-1.0342, -0.1949, -0.4329, -0.2236});
    e.H = arm.H;
    e.beta = arm.beta;
    return e;
}

inline Example example(const std::string& which) {
    if (which == "one") return example_one();
    if (which == "two") return example_two();
    throw std::invalid_argument("unknown example '" + which + "' (expected one|two)");
}

}  // namespace ddmpc::presets
