#include "hho/error.hpp"
#include "hho/local.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace hho;

namespace {

std::vector<std::pair<std::string, PolytopalMesh>> cell_zoo()
{
    std::vector<std::pair<std::string, PolytopalMesh>> cells;
    cells.emplace_back("segment", fixtures::segment_cell(0.2, 0.45));
    cells.emplace_back("triangle", fixtures::triangle_cell());
    cells.emplace_back("square", fixtures::square_cell());
    cells.emplace_back("pentagon", fixtures::pentagon_cell());
    cells.emplace_back("hexagon", fixtures::regular_hexagon(0.3));
    return cells;
}

/// Local vector with the value 1 for the constant cell and face functions.
Eigen::VectorXd all_constant(const LocalDofLayout& layout)
{
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.total));
    v(0) = 1.0;
    for (std::size_t off : layout.face_offsets)
        v(static_cast<Eigen::Index>(off)) = 1.0;
    return v;
}

} // namespace

TEST(Layout, Offsets)
{
    const auto m = fixtures::pentagon_cell();
    const LocalDofLayout l(m, 0, 2);
    EXPECT_EQ(l.cell_dofs, 6u);
    ASSERT_EQ(l.face_offsets.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(l.face_dofs[i], 3u);
        EXPECT_EQ(l.face_offsets[i], 6u + 3u * i);
    }
    EXPECT_EQ(l.total, 21u);
    const LocalDofLayout l1(fixtures::segment_cell(), 0, 3);
    EXPECT_EQ(l1.total, 6u);
}

TEST(Reduction, Constant)
{
    for (const auto& [name, m] : cell_zoo()) {
        const Eigen::VectorXd v = local_reduction(m, 0, 2, [](const Point&) { return 1.0; }, 4);
        EXPECT_LT((v - all_constant(LocalDofLayout(m, 0, 2))).norm(), 1e-14) << name;
    }
}

TEST(Reduction, SineMean)
{
    const auto m = fixtures::segment_cell(0.0, 0.1);
    const double pi = std::numbers::pi;
    const Eigen::VectorXd v = local_reduction(m, 0, 0, [pi](const Point& x) { return std::sin(pi * x.x()); }, 16);
    EXPECT_NEAR(v(0), (1.0 - std::cos(0.1 * pi)) / (0.1 * pi), 1e-15);
    EXPECT_NEAR(v(1), 0.0, 1e-15);
    EXPECT_NEAR(v(2), std::sin(0.1 * pi), 1e-15);
}

TEST(Reconstruction, HandComputedInterval)
{
    const auto m = fixtures::segment_cell();
    const Eigen::MatrixXd r = reconstruction_operator(m, 0, 0);
    const Eigen::Vector3d v(0.0, 0.0, 1.0);  // v_K, v_left, v_right
    const Eigen::VectorXd p = r * v;
    // p(x) = x - 1/2 in the basis {1, (x - 1/2)}
    EXPECT_NEAR(p(0), 0.0, 1e-15);
    EXPECT_NEAR(p(1), 1.0, 1e-15);

    const auto s = stabilization_operator(m, 0, 0, r);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR((s[0] * v)(0), 0.5, 1e-15);
    EXPECT_NEAR((s[1] * v)(0), 0.5, 1e-15);

    const Eigen::MatrixXd a = local_stiffness(m, 0, 0, 1.0);
    EXPECT_NEAR(v.dot(a * v), 1.5, 1e-14);
}

TEST(LocalStiffness, IntervalOracle)
{
    // brute force composition of gradient and stabilization parts on [0, 1], k = 0
    const auto m = fixtures::segment_cell();
    const double eta = 2.5;
    const Eigen::MatrixXd a = local_stiffness(m, 0, 0, eta);
    auto form = [eta](const Eigen::Vector3d& v, const Eigen::Vector3d& w) {
        // p = v_K + (v_R - v_L)(x - 1/2); S_L = v_L - p(0), S_R = v_R - p(1)
        const double gv = v(2) - v(1), gw = w(2) - w(1);
        const double sl_v = v(1) - (v(0) - 0.5 * gv), sr_v = v(2) - (v(0) + 0.5 * gv);
        const double sl_w = w(1) - (w(0) - 0.5 * gw), sr_w = w(2) - (w(0) + 0.5 * gw);
        return gv * gw + eta * (sl_v * sl_w + sr_v * sr_w);
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(a(i, j), form(Eigen::Vector3d::Unit(i), Eigen::Vector3d::Unit(j)), 1e-14);
}

TEST(Reconstruction, ReproducesPolynomials)
{
    std::mt19937_64 rng(2024);
    for (const auto& [name, m] : cell_zoo())
        for (int k = 0; k <= 3; ++k) {
            const Eigen::MatrixXd r = reconstruction_operator(m, 0, k);
            const CellBasis high(m, 0, k + 1);
            const auto rule = cell_rule(m, 0, 2 * k + 2);
            for (int trial = 0; trial < 100; ++trial) {
                const fixtures::RandomPolynomial w(m.dim(), k + 1, rng);
                const Eigen::VectorXd p = r * local_reduction(m, 0, k, std::cref(w), 2 * k + 4);
                double err = 0.0;
                for (const Point& x : rule.points)
                    err = std::max(err, std::abs(high.eval(x).dot(p) - w(x)));
                ASSERT_LE(err, 1e-12) << name << " k=" << k;
            }
        }
}

TEST(Stabilization, KernelOnReducedPolynomials)
{
    std::mt19937_64 rng(99);
    for (const auto& [name, m] : cell_zoo())
        for (int k = 0; k <= 3; ++k) {
            const auto s = stabilization_operator(m, 0, k, reconstruction_operator(m, 0, k));
            for (int trial = 0; trial < 100; ++trial) {
                const fixtures::RandomPolynomial w(m.dim(), k + 1, rng);
                const Eigen::VectorXd v = local_reduction(m, 0, k, std::cref(w), 2 * k + 4);
                for (const auto& sf : s)
                    ASSERT_LE((sf * v).lpNorm<Eigen::Infinity>(), 1e-12) << name << " k=" << k;
            }
        }
}

TEST(LocalStiffness, SymmetricPsdWithConstantKernel)
{
    for (const auto& [name, m] : cell_zoo())
        for (int k = 0; k <= 3; ++k) {
            const LocalDofLayout layout(m, 0, k);
            const Eigen::MatrixXd a = local_stiffness(m, 0, k, 1.0);
            EXPECT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-14 * a.cwiseAbs().maxCoeff());
            const Eigen::VectorXd c = all_constant(layout);
            EXPECT_LT((a * c).norm(), 1e-12 * a.norm()) << name << " k=" << k;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
            const Eigen::VectorXd ev = es.eigenvalues();
            EXPECT_GT(ev(0), -1e-12 * ev(ev.size() - 1));
            // exactly one null direction
            EXPECT_GT(ev(1), 1e-8 * ev(ev.size() - 1)) << name << " k=" << k;
        }
}

TEST(LocalStiffness, RejectsNonPositiveEta)
{
    const auto m = fixtures::triangle_cell();
    EXPECT_THROW(local_stiffness(m, 0, 1, 0.0), ConfigError);
    EXPECT_THROW(local_stiffness(m, 0, 1, -1.0), ConfigError);
    EXPECT_THROW(local_stiffness(m, 0, -1, 1.0), ConfigError);
}

TEST(LocalMass, MatchesBasisMass)
{
    const auto m = fixtures::pentagon_cell();
    const Eigen::MatrixXd mass = local_mass(m, 0, 2);
    EXPECT_LT((mass - mass_matrix(CellBasis(m, 0, 2), cell_rule(m, 0, 4))).norm(), 1e-14 * mass.norm());
}

TEST(EllipticProjector, GradientOrthogonality)
{
    const ScalarFunction f = [](const Point& x) { return std::sin(3 * x.x()) * std::exp(x.y()); };
    const auto m = fixtures::pentagon_cell();
    for (int k = 0; k <= 3; ++k) {
        const Eigen::VectorXd p = reconstruction_operator(m, 0, k) * local_reduction(m, 0, k, f, 20);
        const CellBasis high(m, 0, k + 1);
        const auto rule = cell_rule(m, 0, 20);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(high.size()));
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point& x = rule.points[q];
            const double eps = 1e-6;
            const Point grad_f((f(Point(x.x() + eps, x.y())) - f(Point(x.x() - eps, x.y()))) / (2 * eps),
                               (f(Point(x.x(), x.y() + eps)) - f(Point(x.x(), x.y() - eps))) / (2 * eps));
            const Gradients g = high.eval_grad(x);
            const Point diff = Point(g.transpose() * p) - grad_f;
            r += rule.weights[q] * g * diff;
        }
        EXPECT_LT(r.norm(), 1e-8) << "k=" << k;
    }
}

TEST(Coercivity, ScaleInvariantEquivalence)
{
    // the ratio a(v, v) / |v|^2 is invariant under dilation of the cell
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k <= 2; ++k) {
        std::vector<double> ratios;
        for (double scale : {1.0, 0.1, 0.01}) {
            std::vector<Point> v{Point(0, 0), Point(1.2, 0.1), Point(1.4, 0.9), Point(0.6, 1.3), Point(-0.1, 0.7)};
            for (auto& p : v)
                p *= scale;
            const PolytopalMesh m(2, v, {{0, 1, 2, 3, 4}});
            const LocalDofLayout layout(m, 0, k);
            std::mt19937_64 local_rng(17);
            HhoVector x;
            x.cell = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(layout.cell_dofs), [&] { return u(local_rng); });
            x.face = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(layout.total - layout.cell_dofs),
                                                  [&] { return u(local_rng); });
            const Eigen::VectorXd local = gather_local(m, 0, k, x);
            const double a = local.dot(local_stiffness(m, 0, k, 1.0) * local);
            const double n = hho_seminorm(m, k, x);
            ASSERT_GT(a, 0.0);
            ratios.push_back(a / (n * n));
        }
        EXPECT_NEAR(ratios[1], ratios[0], 1e-9 * ratios[0]);
        EXPECT_NEAR(ratios[2], ratios[0], 1e-9 * ratios[0]);
        EXPECT_GT(ratios[0], 1e-3);
        EXPECT_LT(ratios[0], 1e3);
    }
    (void)rng;
}

TEST(Seminorm, Cases)
{
    // constant field with zero boundary traces is not in the kernel
    const auto m = build_uniform_interval(4);
    HhoVector c{Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(5)};
    c.face(0) = 0.0;
    c.face(4) = 0.0;
    EXPECT_GT(hho_seminorm(m, 0, c), 0.0);
    HhoVector z{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(5)};
    EXPECT_EQ(hho_seminorm(m, 0, z), 0.0);

    // v_K = x on [0, 1] with matching traces: only the gradient part remains
    const auto one = fixtures::segment_cell();
    const CellBasis b(one, 0, 1);
    HhoVector lin;
    lin.cell = Eigen::Vector2d(0.5 * 1.0, 1.0);  // x = 1/2 + (x - 1/2)
    lin.face = Eigen::Vector2d(0.0, 1.0);
    EXPECT_NEAR(hho_seminorm(one, 1, lin), 1.0, 1e-14);
}

TEST(Seminorm, BruteForce)
{
    // two cells on [0, 1], k = 0: |v|^2 = sum over cells of tau (v_K - v_F)^2 at both ends
    const auto m = build_uniform_interval(2);
    HhoVector v{Eigen::Vector2d(0.3, -0.7), Eigen::Vector3d(0.1, 0.4, -0.2)};
    const double eta = 1.7, tau = eta / 0.5;
    double expected = 0.0;
    for (int c = 0; c < 2; ++c) {
        const auto& faces = m.cell(static_cast<std::size_t>(c)).faces;
        for (std::size_t f : faces)
            expected += tau * std::pow(v.cell(c) - v.face(static_cast<Eigen::Index>(f)), 2);
    }
    EXPECT_NEAR(hho_seminorm(m, 0, v, eta), std::sqrt(expected), 1e-14);
}
