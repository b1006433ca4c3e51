#include "hho/quadrature.hpp"
#include "hho/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

namespace hho {

void QuadratureRule::append(const QuadratureRule& other)
{
    points.insert(points.end(), other.points.begin(), other.points.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x)
{
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double pk = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = pk;
    }
    return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

GaussLegendre compute_gauss_legendre(std::size_t n)
{
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75)
                            / (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = legendre(n, x).second;
        gl.nodes[n - 1 - i] = x;
        gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

std::size_t points_for_order(int order)
{
    return static_cast<std::size_t>(std::max(order, 0) / 2 + 1);
}

} // namespace

const GaussLegendre& gauss_legendre(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, GaussLegendre> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

QuadratureRule segment_rule(const Point& a, const Point& b, int order)
{
    const auto& gl = gauss_legendre(points_for_order(order));
    const double length = (b - a).norm();
    QuadratureRule rule;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double s = 0.5 * (gl.nodes[i] + 1.0);
        rule.points.push_back(a + s * (b - a));
        rule.weights.push_back(0.5 * length * gl.weights[i]);
    }
    return rule;
}

QuadratureRule triangle_rule(const Point& v0, const Point& v1, const Point& v2, int order)
{
    const Point e1 = v1 - v0, e2 = v2 - v0;
    const double twice_area = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(std::abs(twice_area) > 1e-14 * std::max(e1.squaredNorm(), e2.squaredNorm())))
        throw MeshError("triangle_rule: degenerate triangle");

    // (u, v) = (s, t (1 - s)) maps the unit square onto the reference
    // triangle with Jacobian (1 - s); one extra point in s absorbs it.
    const auto& gs = gauss_legendre(points_for_order(order + 1));
    const auto& gt = gauss_legendre(points_for_order(order));
    QuadratureRule rule;
    for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
        const double s = 0.5 * (gs.nodes[i] + 1.0);
        for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
            const double t = 0.5 * (gt.nodes[j] + 1.0);
            const double u = s, v = t * (1.0 - s);
            rule.points.push_back(v0 + u * e1 + v * e2);
            rule.weights.push_back(0.25 * gs.weights[i] * gt.weights[j] * (1.0 - s)
                                   * std::abs(twice_area));
        }
    }
    return rule;
}

QuadratureRule cell_rule(const PolytopalMesh& mesh, std::size_t cell, int order)
{
    const Cell& c = mesh.cell(cell);
    const auto& vs = mesh.vertices();
    if (mesh.dim() == 1)
        return segment_rule(vs[c.vertices[0]], vs[c.vertices[1]], order);

    if (c.vertices.size() == 3)
        return triangle_rule(vs[c.vertices[0]], vs[c.vertices[1]], vs[c.vertices[2]], order);

    QuadratureRule rule;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        const Point& a = vs[c.vertices[i]];
        const Point& b = vs[c.vertices[(i + 1) % c.vertices.size()]];
        const Point ea = a - c.centroid, eb = b - c.centroid;
        if (ea.x() * eb.y() - ea.y() * eb.x() <= 0.0)
            throw MeshError("cell " + std::to_string(cell)
                            + " is not star-shaped with respect to its centroid");
        rule.append(triangle_rule(c.centroid, a, b, order));
    }
    return rule;
}

QuadratureRule face_rule(const PolytopalMesh& mesh, std::size_t face, int order)
{
    const Face& f = mesh.face(face);
    if (mesh.dim() == 1)
        return QuadratureRule{{f.barycenter}, {1.0}};
    return segment_rule(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], order);
}

} // namespace hho
