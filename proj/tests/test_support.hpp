#pragma once

#include "hho/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace hho::fixtures {

/// Single cell meshes of the shapes the method must handle.
inline PolytopalMesh segment_cell(double a = 0.0, double b = 1.0)
{
    return PolytopalMesh(1, {Point(a, 0.0), Point(b, 0.0)}, {{0, 1}});
}

inline PolytopalMesh triangle_cell()
{
    return PolytopalMesh(2, {Point(0.1, 0.2), Point(0.9, 0.3), Point(0.4, 0.8)}, {{0, 1, 2}});
}

inline PolytopalMesh square_cell()
{
    return PolytopalMesh(2, {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}, {{0, 1, 2, 3}});
}

inline PolytopalMesh regular_hexagon(double side = 1.0)
{
    std::vector<Point> v;
    for (int i = 0; i < 6; ++i)
        v.emplace_back(side * std::cos(i * M_PI / 3.0), side * std::sin(i * M_PI / 3.0));
    return PolytopalMesh(2, v, {{0, 1, 2, 3, 4, 5}});
}

/// Irregular convex pentagon.
inline PolytopalMesh pentagon_cell()
{
    return PolytopalMesh(2, {Point(0, 0), Point(1.2, 0.1), Point(1.4, 0.9), Point(0.6, 1.3), Point(-0.1, 0.7)},
                         {{0, 1, 2, 3, 4}});
}

/// Random polynomial of total degree <= degree in global monomials.
struct RandomPolynomial {
    int dim;
    int degree;
    std::vector<std::array<int, 2>> exponents;
    Eigen::VectorXd coeffs;

    RandomPolynomial(int d, int k, std::mt19937_64& rng) : dim(d), degree(k)
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int t = 0; t <= k; ++t)
            for (int a = t; a >= 0; --a) {
                if (d == 1 && a != t)
                    continue;
                exponents.push_back({a, t - a});
            }
        coeffs.resize(static_cast<Eigen::Index>(exponents.size()));
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            coeffs(i) = u(rng);
    }

    double operator()(const Point& x) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < exponents.size(); ++i)
            s += coeffs(static_cast<Eigen::Index>(i)) * std::pow(x.x(), exponents[i][0])
                 * std::pow(x.y(), exponents[i][1]);
        return s;
    }

    Point gradient(const Point& x) const
    {
        Point g = Point::Zero();
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            const auto [a, b] = exponents[i];
            const double c = coeffs(static_cast<Eigen::Index>(i));
            if (a > 0)
                g.x() += c * a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
            if (b > 0)
                g.y() += c * b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
        }
        return g;
    }
};

} // namespace hho::fixtures
