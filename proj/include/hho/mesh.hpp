#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <vector>

namespace hho {

using Point = Eigen::Vector2d;

/// A mesh face: a point (d = 1) or a straight edge (d = 2).
struct Face {
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> cells;   ///< one (boundary) or two (interface) cells
    std::vector<Point> normals;       ///< outward unit normal seen from cells[i]
    Point barycenter = Point::Zero();
    double measure = 0.0;             ///< edge length, or 1 for a point face
    double diameter = 0.0;            ///< edge length, or 0 for a point face
    bool boundary = false;
};

struct Cell {
    std::vector<std::size_t> vertices; ///< counter-clockwise loop (d = 2) or endpoints (d = 1)
    std::vector<std::size_t> faces;    ///< incident faces in local order
    Point centroid = Point::Zero();
    double measure = 0.0;
    double diameter = 0.0;
};

/// Polytopal mesh of a domain in one or two space dimensions. Faces and all
/// geometric quantities are derived at construction; the object is immutable
/// afterwards. One-dimensional vertices store their coordinate in x, y = 0.
class PolytopalMesh {
public:
    PolytopalMesh(int dim, std::vector<Point> vertices,
                  std::vector<std::vector<std::size_t>> cells);

    int dim() const { return dim_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<Face>& faces() const { return faces_; }
    const Cell& cell(std::size_t c) const { return cells_[c]; }
    const Face& face(std::size_t f) const { return faces_[f]; }
    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_faces() const { return faces_.size(); }
    std::size_t num_interfaces() const;
    std::size_t num_boundary_faces() const { return num_faces() - num_interfaces(); }

    /// h = max over cells of the cell diameter.
    double h() const;
    /// Sum of cell measures.
    double measure() const;

    /// Outward unit normal of `face` with respect to `cell`.
    const Point& normal(std::size_t cell, std::size_t face) const;

    /// Length scale h in the stabilization weight eta / h: the diameter of
    /// the cell, for every face of that cell.
    double stabilization_length(std::size_t cell, std::size_t face) const;

private:
    void build_faces_1d();
    void build_faces_2d();

    int dim_;
    std::vector<Point> vertices_;
    std::vector<Cell> cells_;
    std::vector<Face> faces_;
};

PolytopalMesh build_uniform_interval(std::size_t n);
PolytopalMesh build_uniform_square(std::size_t n);
/// n x n sub-squares of [origin, origin + extent]^2, each cut along the
/// lower-left to upper-right diagonal.
PolytopalMesh build_triangular_square(std::size_t n, const Point& origin = Point::Zero(),
                                      double extent = 1.0);
/// (0,2)^2 minus [1,2]^2 with each unit square triangulated as build_triangular_square(n).
PolytopalMesh build_lshape(std::size_t n);
/// Honeycomb of the unit square, clipped at the boundary; 6 * 2^level columns.
PolytopalMesh build_hexagonal(std::size_t level);
/// Ring triangulation of the regular polygon with 24 * 2^level vertices
/// inscribed in the unit circle.
PolytopalMesh build_disk(std::size_t level);
/// Red refinement of triangles (4 children) or bisection of segments.
PolytopalMesh refine_uniform(const PolytopalMesh& mesh);

PolytopalMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const PolytopalMesh& mesh, const std::filesystem::path& path);

} // namespace hho
