#include "ddmpc/presets.hpp"
#include "ddmpc/sdp.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace ddmpc;

namespace {

Dataset angular_data(int vertex, Eigen::Index T, std::uint64_t seed) {
    return run_experiment(presets::angular_vertex(vertex), presets::example_one().x0, excitation_inputs(1, 1.0, T, seed),
                          false);
}

Dataset arm_data(Eigen::Index T, std::uint64_t seed) {
    return run_experiment(presets::flexible_arm(), presets::example_two().x0, excitation_inputs(1, 2.0, T, seed), true);
}

Vector random_theta(std::mt19937_64& rng, std::size_t size) {
    std::normal_distribution<double> nd;
    Vector t(static_cast<Eigen::Index>(size));
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = nd(rng);
    return t;
}

// Drops rows and columns [start, start + count) of a square matrix.
Matrix remove_rows_cols(const Matrix& m, Eigen::Index start, Eigen::Index count) {
    const Eigen::Index n = m.rows() - count;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i < start || i >= start + count) keep.push_back(i);
    }
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(keep[i], keep[j]);
    return out;
}

std::vector<Eigen::Index> sides(const LmiProblem& p) {
    std::vector<Eigen::Index> s;
    for (const auto& b : p.constraints) s.push_back(b.side());
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Weights kOneWeights = make_weights(Matrix::Identity(2, 2), Matrix::Constant(1, 1, 0.01));

}  // namespace

TEST(Weights, RootsAndBlockStructure) {
    const presets::Example e = presets::example_two();
    const Weights w = make_weights(e.Q, e.R);
    EXPECT_LT((w.Q_hat.transpose() * w.Q_hat - e.Q).norm(), 1e-10);
    EXPECT_LT((w.R_hat.transpose() * w.R_hat - e.R).norm(), 1e-10);
    EXPECT_TRUE((w.Q_hat.transpose() * w.R_hat).isZero(0.0));
    EXPECT_THROW(make_weights(Matrix::Identity(2, 2), Matrix::Zero(1, 1)), NumericalError);
}

TEST(ConstraintRows, UnitInputBound) {
    const ConstraintRows r = make_constraint_rows(Matrix(0, 2), box_rows({{0, -1.0, 1.0}}, 1), 2, 1);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.rows[0].d(0), 1.0);
    EXPECT_EQ(r.rows[1].d(0), -1.0);
    EXPECT_TRUE(r.rows[0].c.isZero());
    EXPECT_TRUE(r.rows[1].c.isZero());
}

TEST(ConstraintRows, AngleBoxes) {
    const double h = std::numbers::pi / 2;
    const ConstraintRows r = make_constraint_rows(box_rows({{0, -h, h}, {2, -h, h}}, 4), Matrix(0, 1), 4, 1);
    ASSERT_EQ(r.size(), 4u);
    const double k = 2.0 / std::numbers::pi;
    EXPECT_NEAR(r.rows[0].c(0), k, 1e-15);
    EXPECT_NEAR(r.rows[1].c(0), -k, 1e-15);
    EXPECT_NEAR(r.rows[2].c(2), k, 1e-15);
    EXPECT_NEAR(r.rows[3].c(2), -k, 1e-15);
    for (const auto& row : r.rows) {
        EXPECT_TRUE(row.d.isZero());
        EXPECT_EQ((row.c.array() != 0.0).count(), 1);
    }
}

TEST(ConstraintRows, EmptyAndInvalid) {
    const ConstraintRows r = make_constraint_rows(Matrix(0, 2), Matrix(0, 1), 2, 1);
    EXPECT_TRUE(r.empty());
    EXPECT_THROW(box_rows({{0, 0.0, 1.0}}, 1), DimensionError);
    EXPECT_THROW(box_rows({{0, -1.0, INFINITY}}, 1), DimensionError);
    EXPECT_THROW(box_rows({{3, -1.0, 1.0}}, 1), DimensionError);

    const LmiProblem p = build_nominal(angular_data(1, 10, 1), kOneWeights, r, presets::example_one().x0);
    EXPECT_EQ(p.constraints.size(), 3u);
}

TEST(Psi, Examples) {
    const Weights w = make_weights(Matrix::Identity(2, 2), Matrix::Constant(1, 1, 0.01));
    Matrix top(3, 2);
    top << 1, 0, 0, 1, 0, 0;
    EXPECT_TRUE(psi(Matrix::Identity(2, 2), Matrix::Zero(1, 2), w).isApprox(top, 1e-15));

    const Weights unit = make_weights(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    Matrix bottom = Matrix::Zero(4, 2);
    bottom.bottomRows(2) = Matrix::Identity(2, 2);
    EXPECT_TRUE(psi(Matrix::Zero(2, 2), Matrix::Identity(2, 2), unit).isApprox(bottom, 1e-15));

    Matrix expect(3, 2);
    expect << 1, 0, 0, 1, 0.1, 0.1;
    EXPECT_TRUE(psi(Matrix::Identity(2, 2), Matrix::Ones(1, 2), w).isApprox(expect, 1e-14));
    EXPECT_THROW(psi(Matrix::Identity(3, 3), Matrix::Ones(1, 3), w), DimensionError);
}

TEST(BuildNominal, SizesForAngularSetup) {
    const presets::Example e = presets::example_one();
    const LmiProblem p = build_nominal(angular_data(1, 10, 1), kOneWeights, e.rows(), e.x0);
    EXPECT_EQ(sides(p), (std::vector<Eigen::Index>{3, 10, 5, 3, 3}));
    EXPECT_EQ(p.vars.size(), 8u);
    EXPECT_EQ(p.block("ellip").side(), 3);
    EXPECT_EQ(p.block("con_1").side(), 3);
    EXPECT_EQ(p.vars.names[static_cast<std::size_t>(p.objective_index())], "alpha");
    EXPECT_EQ(p.delta, 1e-6);
    EXPECT_THROW(p.block("nope"), std::out_of_range);
}

TEST(BuildNominal, ZeroDataReproducesPrintedPattern) {
    const Dataset d = run_experiment(presets::angular_vertex(1), Vector::Zero(2), Matrix::Zero(1, 3), false);
    const presets::Example e = presets::example_one();
    const LmiProblem p = build_nominal(d, kOneWeights, e.rows(), e.x0);
    DecisionPoint dp{Matrix::Identity(2, 2), Matrix::Zero(1, 2), 1.0, 1.0, 1.0, {}};
    const auto blocks = evaluate(p, dp);

    const Matrix I2 = Matrix::Identity(2, 2);
    Matrix psi_t(2, 3);
    psi_t << 1, 0, 0, 0, 1, 0;
    BlockGrid stab(5, std::vector<BlockCell>(5));
    stab[0][0] = Matrix::Zero(2, 2);
    stab[1][3] = I2;
    stab[3][1] = I2;
    stab[2][3] = Matrix::Zero(1, 2);
    stab[3][2] = Matrix::Zero(2, 1);
    stab[3][3] = I2;
    stab[3][4] = psi_t;
    stab[4][3] = psi_t.transpose();
    stab[4][4] = Matrix::Identity(3, 3);
    const SymMatrix expect_stab = assemble_blocks(BlockLayout::symmetric({2, 2, 1, 2, 3}), stab);
    EXPECT_EQ(blocks[1].first, "stab");
    EXPECT_TRUE(blocks[1].second.matrix().isApprox(expect_stab.matrix(), 1e-15));

    BlockGrid ellip{{Matrix::Ones(1, 1), Matrix(e.x0.transpose())}, {Matrix(e.x0), I2}};
    EXPECT_TRUE(blocks[0].second.matrix().isApprox(assemble_blocks(BlockLayout::symmetric({1, 2}), ellip).matrix(), 1e-15));

    BlockGrid stab2{{I2, psi_t}, {Matrix(psi_t.transpose()), Matrix::Identity(3, 3)}};
    EXPECT_TRUE(blocks[2].second.matrix().isApprox(assemble_blocks(BlockLayout::symmetric({2, 3}), stab2).matrix(), 1e-15));
}

TEST(BuildNominal, EpsilonMultipliesOnlyTheDataTerm) {
    const presets::Example e = presets::example_one();
    const Dataset d = angular_data(2, 10, 4);
    const LmiProblem p = build_nominal(d, kOneWeights, e.rows(), e.x0);
    const int k = p.vars.epsilon_index();
    for (const auto& b : p.constraints) {
        const auto it = std::find_if(b.coeffs.begin(), b.coeffs.end(), [k](const auto& c) { return c.first == k; });
        if (b.name != "stab") {
            EXPECT_EQ(it, b.coeffs.end()) << b.name;
            continue;
        }
        ASSERT_NE(it, b.coeffs.end());
        const Matrix v = data_vector(d, false);
        Matrix padded = Matrix::Zero(10, v.cols());
        padded.topRows(v.rows()) = v;
        EXPECT_TRUE(it->second.isApprox(padded * padded.transpose(), 1e-14));
    }
}

TEST(BuildNominal, CoordinateCountIndependentOfLength) {
    const presets::Example e = presets::example_one();
    const LmiProblem a = build_nominal(angular_data(1, 10, 1), kOneWeights, e.rows(), e.x0);
    const LmiProblem b = build_nominal(angular_data(1, 1000, 1), kOneWeights, e.rows(), e.x0);
    EXPECT_EQ(a.vars.names, b.vars.names);
    EXPECT_EQ(sides(a), sides(b));

    const presets::Example two = presets::example_two();
    const Weights w2 = make_weights(two.Q, two.R);
    const LmiProblem c = build_lure(arm_data(50, 2), w2, two.rows(), two.x0, *two.H, *two.beta);
    const LmiProblem f = build_lure(arm_data(400, 2), w2, two.rows(), two.x0, *two.H, *two.beta);
    EXPECT_EQ(c.vars.names, f.vars.names);
    EXPECT_EQ(sides(c), sides(f));
}

TEST(BuildNominal, DimensionErrors) {
    const presets::Example e = presets::example_one();
    const Dataset d = angular_data(1, 10, 1);
    EXPECT_THROW(build_nominal(d, kOneWeights, e.rows(), Vector::Zero(3)), DimensionError);
    EXPECT_THROW(build_nominal(d, make_weights(Matrix::Identity(3, 3), e.R), e.rows(), e.x0), DimensionError);
    EXPECT_THROW(build_lure(d, kOneWeights, e.rows(), e.x0, Matrix::Zero(1, 2), Matrix::Ones(1, 1)), DimensionError);
}

TEST(BuildPolytopic, AngularSetupCounts) {
    const presets::Example e = presets::example_one();
    const LmiProblem p =
        build_polytopic({angular_data(1, 10, 101), angular_data(2, 10, 102)}, kOneWeights, e.rows(), e.x0);
    EXPECT_EQ(p.constraints.size(), 6u);
    EXPECT_EQ(p.block("stab_0").side(), 10);
    EXPECT_EQ(p.block("stab_1").side(), 10);
    EXPECT_EQ(p.mode, Mode::polytopic);
    EXPECT_EQ(p.vars.size(), 8u);

    const LmiProblem per = build_polytopic({angular_data(1, 10, 101), angular_data(2, 10, 102)}, kOneWeights, e.rows(),
                                           e.x0, LmiOptions{1e-6, true});
    EXPECT_EQ(per.vars.size(), 9u);
}

TEST(BuildPolytopic, SingleVertexIsNominal) {
    const presets::Example e = presets::example_one();
    const Dataset d = angular_data(1, 10, 7);
    EXPECT_EQ(dump(build_polytopic({d}, kOneWeights, e.rows(), e.x0)), dump(build_nominal(d, kOneWeights, e.rows(), e.x0)));
}

TEST(BuildPolytopic, DuplicatedVertexIsRedundant) {
    const presets::Example e = presets::example_one();
    const Dataset d = angular_data(2, 10, 8);
    const LmiProblem one = build_nominal(d, kOneWeights, e.rows(), e.x0);
    const LmiProblem two = build_polytopic({d, d}, kOneWeights, e.rows(), e.x0);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        const Vector th = random_theta(rng, one.vars.size());
        EXPECT_EQ(two.block("stab_0").evaluate(th).matrix(), two.block("stab_1").evaluate(th).matrix());
        EXPECT_EQ(two.block("stab_0").evaluate(th).matrix(), one.block("stab").evaluate(th).matrix());
    }
    EXPECT_THROW(build_polytopic({d, arm_data(10, 1)}, kOneWeights, e.rows(), e.x0), DimensionError);
}

TEST(BuildLure, ArmSizes) {
    const presets::Example e = presets::example_two();
    const LmiProblem p = build_lure(arm_data(50, 201), make_weights(e.Q, e.R), e.rows(), e.x0, *e.H, *e.beta);
    EXPECT_EQ(p.block("stab").side(), 20);
    EXPECT_EQ(p.block("stab2").side(), 10);
    EXPECT_EQ(p.block("ellip").side(), 5);
    EXPECT_EQ(p.vars.size(), 17u);
    EXPECT_EQ(p.constraints.size(), 3u + 6u);
    EXPECT_THROW(build_lure(angular_data(1, 10, 1), kOneWeights, presets::example_one().rows(), presets::example_one().x0,
                            Matrix::Zero(0, 2), Matrix::Zero(0, 0)),
                 DimensionError);
}

TEST(BuildLure, SectorRemovedMatchesNominalStructure) {
    const presets::Example e = presets::example_two();
    const Weights w = make_weights(e.Q, e.R);
    Dataset d = arm_data(30, 5);
    d.W_minus->setZero();
    const LmiProblem lure = build_lure(d, w, e.rows(), e.x0, *e.H, Matrix::Zero(1, 1));
    const LmiProblem nom = build_nominal(d, w, e.rows(), e.x0);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Vector th = random_theta(rng, nom.vars.size());
        const Matrix s = lure.block("stab").evaluate(th).matrix();
        // sector rows: alpha blocks only
        const Eigen::Index at = 2 * 4 + 1;
        EXPECT_TRUE(s.block(at, 0, 2, at).isZero(0.0));
        EXPECT_TRUE(s.block(at, at + 2, 2, s.cols() - at - 2).isZero(0.0));
        EXPECT_TRUE(remove_rows_cols(s, at, 2).isApprox(nom.block("stab").evaluate(th).matrix(), 1e-13));
        const Matrix s2 = lure.block("stab2").evaluate(th).matrix();
        EXPECT_TRUE(remove_rows_cols(s2, 4, 1).isApprox(nom.block("stab2").evaluate(th).matrix(), 1e-13));
        EXPECT_DOUBLE_EQ(s2(4, 4), th(nom.vars.alpha_index()));
    }
}

TEST(LmiProblem, EveryBlockIsAffine) {
    const presets::Example one = presets::example_one();
    const presets::Example two = presets::example_two();
    const std::vector<LmiProblem> problems{
        build_nominal(angular_data(1, 10, 1), kOneWeights, one.rows(), one.x0),
        build_polytopic({angular_data(1, 10, 1), angular_data(2, 10, 2)}, kOneWeights, one.rows(), one.x0,
                        LmiOptions{1e-6, true}),
        build_lure(arm_data(50, 3), make_weights(two.Q, two.R), two.rows(), two.x0, *two.H, *two.beta)};
    std::mt19937_64 rng(21);
    for (const auto& p : problems) {
        for (int t = 0; t < 20; ++t) {
            const Vector a = random_theta(rng, p.vars.size());
            const Vector b = random_theta(rng, p.vars.size());
            for (const auto& blk : p.constraints) {
                const Matrix mid = blk.evaluate(0.5 * (a + b)).matrix();
                const Matrix avg = 0.5 * (blk.evaluate(a).matrix() + blk.evaluate(b).matrix());
                EXPECT_LT((mid - avg).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, avg.cwiseAbs().maxCoeff())) << blk.name;
            }
        }
    }
}

TEST(LmiProblem, CoordinatesRoundTrip) {
    const VarLayout v = VarLayout::make(3, 2);
    EXPECT_EQ(v.size(), 6u + 6u + 3u);
    std::mt19937_64 rng(8);
    const Vector t = random_theta(rng, v.size());
    EXPECT_EQ(v.to_coordinates(v.from_coordinates(t)), t);
    const DecisionPoint dp = v.from_coordinates(t);
    EXPECT_EQ(dp.N, dp.N.transpose());
}

TEST(LmiProblem, GoldenDump) {
    Dataset d = run_experiment(LtiPlant(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1)), Vector::Zero(1),
                               (Matrix(1, 2) << 1.0, -1.0).finished(), false);
    const Weights w = make_weights(Matrix::Ones(1, 1), Matrix::Ones(1, 1));
    const ConstraintRows rows = make_constraint_rows(Matrix(0, 1), box_rows({{0, -2.0, 2.0}}, 1), 1, 1);
    const std::string text = dump(build_nominal(d, w, rows, Vector::Ones(1)));
    const std::string golden = slurp(std::string(DDMPC_TEST_DATA) + "/nominal_scalar.dump");
    ASSERT_FALSE(golden.empty());
    EXPECT_EQ(text, golden);
}

TEST(Finsler, Examples) {
    const SymMatrix I = SymMatrix::identity(2);
    const SymMatrix zero(Matrix::Zero(2, 2));
    EXPECT_TRUE(finsler_check({I, zero, 1}, 0.3));
    EXPECT_TRUE(finsler_check({I, zero, 1}, 1e6));
    const SymMatrix M(Matrix(Eigen::Vector2d(1, -1).asDiagonal()));
    const SymMatrix Xi(Matrix(Eigen::Vector2d(0, -1).asDiagonal()));
    EXPECT_TRUE(finsler_check({M, Xi, 1}, 1.0));
    for (double eps : {0.0, 0.5, 1.0, 10.0, 1e6}) EXPECT_FALSE(finsler_check({M, zero, 1}, eps));
    EXPECT_THROW(finsler_check({M, SymMatrix::identity(3), 1}, 1.0), DimensionError);
}

TEST(Finsler, IfDirectionOnDataConsistentGraphs) {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> nd;
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const Dataset d = angular_data(1 + t % 2, 1 + t % 4, 500 + static_cast<std::uint64_t>(t));
        const Matrix v = data_vector(d, false);  // (2n+m) x T
        const SymMatrix Xi(Matrix(-v * v.transpose()));
        Matrix g(5, 5);
        for (int i = 0; i < 25; ++i) g(i / 5, i % 5) = nd(rng);
        const double eps0 = std::abs(nd(rng)) * 10.0;
        const double shift = t % 3 == 0 ? -0.5 : 0.0;  // some instances fail the check
        const SymMatrix M(Matrix(g * g.transpose() - eps0 * v * v.transpose() + shift * Matrix::Identity(5, 5)));
        const FinslerPair fp{M, Xi, 2};
        if (!finsler_check(fp, eps0, 1e-10)) continue;
        ++checked;
        for (const auto& s : consistent_set(d, false).samples(20, static_cast<std::uint64_t>(t))) {
            Matrix z(3, 2);
            z << s.A.transpose(), s.B.transpose();
            EXPECT_LT(quadratic_on_graph(Xi, z).matrix().cwiseAbs().maxCoeff(), 1e-8);
            EXPECT_TRUE(is_psd(quadratic_on_graph(M, z), 1e-8 * (1.0 + z.squaredNorm())));
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Ellipsoid, Examples) {
    ConstraintRows rows;
    rows.n = 2;
    rows.m = 1;
    rows.rows.push_back({(Eigen::RowVectorXd(2) << 1, 0).finished(), Eigen::RowVectorXd::Zero(1)});
    const Matrix K = Matrix::Zero(1, 2);

    const EllipsoidReport a = ellipsoid_contained(Matrix::Identity(2, 2), 1.0, rows, K);
    EXPECT_NEAR(a.margins[0], 0.0, 1e-15);
    EXPECT_TRUE(a.all_contained);

    const EllipsoidReport b = ellipsoid_contained(Matrix::Identity(2, 2), 4.0, rows, K);
    EXPECT_NEAR(b.margins[0], -3.0, 1e-15);
    EXPECT_FALSE(b.all_contained);

    const EllipsoidReport c = ellipsoid_contained(Matrix(Eigen::Vector2d(4, 1).asDiagonal()), 1.0, rows, K);
    EXPECT_NEAR(c.margins[0], 0.75, 1e-15);

    EXPECT_THROW(ellipsoid_contained(Matrix(Eigen::Vector2d(1, -1).asDiagonal()), 1.0, rows, K), NumericalError);
}

TEST(Ellipsoid, InputRowUsesGain) {
    ConstraintRows rows = make_constraint_rows(Matrix(0, 2), box_rows({{0, -1.0, 1.0}}, 1), 2, 1);
    Matrix K(1, 2);
    K << 0.5, 0.0;
    const EllipsoidReport r = ellipsoid_contained(Matrix::Identity(2, 2), 1.0, rows, K);
    EXPECT_NEAR(r.margins[0], 0.75, 1e-15);
    EXPECT_NEAR(r.margins[1], 0.75, 1e-15);
}

TEST(Ellipsoid, AgreesWithBoundarySampling) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
    for (int t = 0; t < 20; ++t) {
        Matrix g(2, 2);
        g << nd(rng), nd(rng), nd(rng), nd(rng);
        const Matrix P = g * g.transpose() + 0.2 * Matrix::Identity(2, 2);
        const double alpha = 0.1 + std::abs(nd(rng));
        ConstraintRows rows;
        rows.n = 2;
        rows.m = 0;
        for (int i = 0; i < 3; ++i) rows.rows.push_back({(Eigen::RowVectorXd(2) << nd(rng), nd(rng)).finished(), {}});
        const EllipsoidReport rep = ellipsoid_contained(P, alpha, rows, Matrix(0, 2));

        // boundary x = sqrt(alpha) P^{-1/2} [cos; sin]
        const Matrix root_inv = sqrt_pd(P).inverse();
        std::vector<double> worst(rows.size(), -INFINITY);
        for (int k = 0; k < 10000; ++k) {
            const double th = ud(rng);
            const Vector x = std::sqrt(alpha) * root_inv * Eigen::Vector2d(std::cos(th), std::sin(th));
            for (std::size_t i = 0; i < rows.size(); ++i) worst[i] = std::max(worst[i], rows.rows[i].c.dot(x));
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const bool sampled = worst[i] <= 1.0;
            // sampling sees the supremum from below; skip knife-edge cases
            if (std::abs(rep.margins[i]) > 1e-3) {
                EXPECT_EQ(rep.contained[i], sampled) << "instance " << t;
            }
        }
    }
}

TEST(ConsistentSetCoverage, ModelLyapunovFormHoldsAtSolvedPoint) {
    const presets::Example e = presets::example_one();
    for (int vertex : {1, 2}) {
        const Dataset d = angular_data(vertex, 10, 100 + static_cast<std::uint64_t>(vertex));
        const LmiProblem p = build_nominal(d, kOneWeights, e.rows(), e.x0);
        const auto [sol, dp] = solve(p, SolverSettings{});
        ASSERT_EQ(sol.status, SolveStatus::optimal) << sol.message;
        ASSERT_TRUE(dp);
        const auto blocks = evaluate(p, *dp);
        ASSERT_TRUE(is_psd(blocks[1].second, 1e-7));
        ASSERT_TRUE(is_psd(blocks[2].second, 1e-7));
        for (const auto& s : consistent_set(d, false).samples(10, 5)) {
            EXPECT_TRUE(is_psd(lyapunov_model_form(*dp, kOneWeights, s.A, s.B), 1e-7));
        }
    }
}
