#include "hho/error.hpp"
#include "hho/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hho;

namespace {

const double pi2 = std::numbers::pi * std::numbers::pi;

double max_relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return ((a - b).array().abs() / b.array().abs()).maxCoeff();
}

} // namespace

TEST(DenseEigen, Diagonal)
{
    Eigen::Matrix2d k;
    k << 3, 0, 0, 2;
    const Spectrum s = solve_eigen(k, {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)}, 2);
    EXPECT_NEAR(s.eigenvalues(0), 2.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues(1), 3.0, 1e-14);
    EXPECT_NEAR(std::abs(s.cell_vectors(1, 0)), 1.0, 1e-14);
}

TEST(DenseEigen, StiffnessEqualsMass)
{
    Eigen::MatrixXd b(2, 2);
    b << 2, 0.5, 0.5, 1;
    const Spectrum s = solve_eigen(b, {b}, 2);
    EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-14);
}

TEST(DenseEigen, RejectsTooManyModes)
{
    EXPECT_THROW(solve_eigen(Eigen::Matrix2d::Identity(), {Eigen::MatrixXd::Identity(2, 2)}, 3), ConfigError);
    EXPECT_THROW(solve_eigen(Eigen::Matrix2d::Identity(), {Eigen::MatrixXd::Identity(2, 2)}, 0), ConfigError);
}

TEST(Condensation, HandComputedInterval)
{
    // A = [4 0 -2; 0 4 -2; -2 -2 6], B = I / 2, K_KK eigenvalues 8/3 and 4
    const GlobalBlocks g = assemble(build_uniform_interval(2), 0, 1.0);
    const Eigen::MatrixXd k = condense_cells(g);
    Eigen::Matrix2d expected;
    expected << 4 - 2.0 / 3, -2.0 / 3, -2.0 / 3, 4 - 2.0 / 3;
    EXPECT_LT((k - expected).norm(), 1e-14);
    const Spectrum s = compute_spectrum(g, 2);
    EXPECT_NEAR(s.eigenvalues(0), 16.0 / 3.0, 1e-13);
    EXPECT_NEAR(s.eigenvalues(1), 8.0, 1e-13);
}

TEST(Condensation, SingleCellIsCellBlock)
{
    const GlobalBlocks g = assemble(build_uniform_interval(1), 2, 1.0);
    EXPECT_EQ(g.dofs.num_face_dofs, 0u);
    EXPECT_LT((condense_cells(g) - g.a_kk[0]).norm(), 1e-14);
}

TEST(Spectrum, IntervalFirstMode)
{
    const Spectrum s = compute_spectrum(assemble(build_uniform_interval(10), 0, 1.0), 1);
    // the discrete eigenvalue lies below the exact one here
    EXPECT_LT(s.eigenvalues(0), pi2);
    EXPECT_NEAR(std::abs(s.eigenvalues(0) - pi2) / pi2, 3.19e-2, 5e-5);
}

TEST(Spectrum, CondensedMatchesFullPencil)
{
    struct Case {
        PolytopalMesh mesh;
        int k;
        double eta;
    };
    const std::vector<Case> cases{{build_uniform_interval(4), 0, 1.0},
                                  {build_uniform_interval(12), 2, 7.0},
                                  {build_uniform_square(2), 1, 1.0},
                                  {build_triangular_square(4), 1, 1.0},
                                  {build_hexagonal(0), 0, 3.0}};
    for (const auto& c : cases) {
        const GlobalBlocks g = assemble(c.mesh, c.k, c.eta);
        ASSERT_LE(g.dofs.num_cell_dofs, 200u);
        const std::size_t m = std::min<std::size_t>(6, g.dofs.num_cell_dofs);
        const Spectrum full = solve_eigen_full_pencil(g, m);
        const Spectrum cond = compute_spectrum(g, m);
        EXPECT_LE(max_relative_gap(cond.eigenvalues, full.eigenvalues), 1e-10);
    }
}

TEST(Spectrum, BOrthonormal)
{
    for (const auto& mesh : {build_uniform_square(6), build_lshape(4)}) {
        const GlobalBlocks g = assemble(mesh, 1, 1.0);
        const Spectrum s = compute_spectrum(g, 8);
        const Eigen::MatrixXd gram = s.cell_vectors.transpose() * (g.cell_mass() * s.cell_vectors);
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Spectrum, KrylovMatchesDense)
{
    const GlobalBlocks g = assemble(build_triangular_square(6), 1, 1.0);
    EigenOptions dense, krylov;
    krylov.dense_limit = 0;
    const Spectrum a = compute_spectrum(g, 6, dense);
    const Spectrum b = compute_spectrum(g, 6, krylov);
    EXPECT_LE(max_relative_gap(b.eigenvalues, a.eigenvalues), 1e-10);
    const Eigen::MatrixXd gram = b.cell_vectors.transpose() * (g.cell_mass() * b.cell_vectors);
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Spectrum, SignConvention)
{
    const Spectrum s = compute_spectrum(assemble(build_uniform_square(4), 0, 1.0), 4);
    for (Eigen::Index j = 0; j < 4; ++j) {
        Eigen::Index i = 0;
        s.cell_vectors.col(j).cwiseAbs().maxCoeff(&i);
        EXPECT_GT(s.cell_vectors(i, j), 0.0);
    }
}

TEST(Recovery, SatisfiesFaceEquations)
{
    const GlobalBlocks g = assemble(build_lshape(4), 1, 1.0);
    const Spectrum s = compute_spectrum(g, 3);
    const Eigen::MatrixXd r = g.a_fk * s.cell_vectors + g.a_ff * s.face_vectors;
    EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Source, ResidualAndZeroLoad)
{
    const auto mesh = build_triangular_square(4);
    const GlobalBlocks g = assemble(mesh, 1, 1.0);
    const Eigen::VectorXd rhs = assemble_rhs(mesh, 1, [](const Point& x) { return std::exp(x.x()) + x.y(); }, 6);
    const SourceSolution sol = solve_source(g, rhs);
    Eigen::VectorXd x(sol.cell.size() + sol.face.size());
    x << sol.cell, sol.face;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(x.size());
    b.head(rhs.size()) = rhs;
    EXPECT_LE((g.full_matrix() * x - b).norm(), 1e-12 * b.norm());

    const SourceSolution zero = solve_source(g, Eigen::VectorXd::Zero(rhs.size()));
    EXPECT_EQ(zero.cell.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(zero.face.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Source, ConsistentWithEigenpairs)
{
    // the source solve with load lambda B u reproduces the eigenvector u
    const GlobalBlocks g = assemble(build_uniform_square(8), 1, 1.0);
    const Spectrum s = compute_spectrum(g, 4);
    const FaceCondensation fc(g);
    for (Eigen::Index j = 0; j < 4; ++j) {
        const Eigen::VectorXd u = s.cell_vectors.col(j);
        const SourceSolution sol = fc.solve(s.eigenvalues(j) * (g.cell_mass() * u));
        EXPECT_LE((sol.cell - u).norm(), 1e-9 * u.norm());
        EXPECT_LE((sol.face - s.face_vectors.col(j)).norm(), 1e-9 * u.norm());
    }
}
