#pragma once

#include "hho/mesh.hpp"

#include <cstddef>
#include <vector>

namespace hho {

/// Points in physical coordinates; weights sum to the measure of the region.
struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    void append(const QuadratureRule& other);
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t n);

/// Gauss-Legendre rule with ceil((order+1)/2) points on the segment [a, b].
QuadratureRule segment_rule(const Point& a, const Point& b, int order);
/// Collapsed tensor (Duffy) rule exact for polynomials of total degree `order`.
QuadratureRule triangle_rule(const Point& v0, const Point& v1, const Point& v2, int order);
/// Segment rule (d = 1) or union of triangle rules over the centroid fan (d = 2).
QuadratureRule cell_rule(const PolytopalMesh& mesh, std::size_t cell, int order);
/// Segment rule on an edge, or a single unit-weight point for d = 1.
QuadratureRule face_rule(const PolytopalMesh& mesh, std::size_t face, int order);

} // namespace hho
