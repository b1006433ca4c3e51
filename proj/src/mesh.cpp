#include "hho/mesh.hpp"
#include "hho/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace hho {

namespace {

double polygon_signed_area(const std::vector<Point>& pts)
{
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& q = pts[(i + 1) % pts.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

} // namespace

PolytopalMesh::PolytopalMesh(int dim, std::vector<Point> vertices,
                             std::vector<std::vector<std::size_t>> cells)
    : dim_(dim), vertices_(std::move(vertices))
{
    if (dim_ != 1 && dim_ != 2)
        throw MeshError("mesh dimension must be 1 or 2, got " + std::to_string(dim_));
    if (cells.empty())
        throw MeshError("mesh has no cells");

    cells_.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& loop = cells[c];
        const std::size_t expected_min = dim_ == 1 ? 2 : 3;
        if (loop.size() < expected_min || (dim_ == 1 && loop.size() != 2))
            throw MeshError("cell " + std::to_string(c) + " is not a closed "
                            + (dim_ == 1 ? "segment" : "polygon"));
        for (auto v : loop) {
            if (v >= vertices_.size())
                throw MeshError("cell " + std::to_string(c) + " references vertex "
                                + std::to_string(v) + " out of range");
        }
        auto sorted = loop;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw MeshError("cell " + std::to_string(c) + " repeats a vertex");

        Cell& cell = cells_[c];
        cell.vertices = loop;
        if (dim_ == 1) {
            const double a = vertices_[loop[0]].x();
            const double b = vertices_[loop[1]].x();
            cell.measure = std::abs(b - a);
            cell.diameter = cell.measure;
            cell.centroid = Point(0.5 * (a + b), 0.0);
        } else {
            std::vector<Point> pts;
            for (auto v : loop)
                pts.push_back(vertices_[v]);
            const double area = polygon_signed_area(pts);
            if (area <= 0.0)
                throw MeshError("cell " + std::to_string(c)
                                + " is degenerate or not counter-clockwise");
            Point cen = Point::Zero();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto& p = pts[i];
                const auto& q = pts[(i + 1) % pts.size()];
                const double cross = p.x() * q.y() - q.x() * p.y();
                cen += (p + q) * cross;
            }
            cell.measure = area;
            cell.centroid = cen / (6.0 * area);
            double diam = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    diam = std::max(diam, (pts[i] - pts[j]).norm());
            cell.diameter = diam;
        }
        if (cell.measure <= 0.0)
            throw MeshError("cell " + std::to_string(c) + " has zero measure");
    }

    if (dim_ == 1)
        build_faces_1d();
    else
        build_faces_2d();
}

void PolytopalMesh::build_faces_1d()
{
    std::map<std::size_t, std::size_t> face_of_vertex;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        Cell& cell = cells_[c];
        // local order: left endpoint first
        auto ends = cell.vertices;
        if (vertices_[ends[0]].x() > vertices_[ends[1]].x())
            std::swap(ends[0], ends[1]);
        for (auto v : ends) {
            auto [it, inserted] = face_of_vertex.try_emplace(v, faces_.size());
            if (inserted) {
                Face f;
                f.vertices = {v};
                f.barycenter = vertices_[v];
                f.measure = 1.0;
                f.diameter = 0.0;
                faces_.push_back(f);
            }
            Face& f = faces_[it->second];
            if (f.cells.size() == 2)
                throw MeshError("vertex " + std::to_string(v) + " shared by more than two cells");
            f.cells.push_back(c);
            const double side = vertices_[v].x() > cell.centroid.x() ? 1.0 : -1.0;
            f.normals.emplace_back(side, 0.0);
            cell.faces.push_back(it->second);
        }
    }
    for (auto& f : faces_)
        f.boundary = f.cells.size() == 1;
}

void PolytopalMesh::build_faces_2d()
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> face_of_edge;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        Cell& cell = cells_[c];
        const auto& loop = cell.vertices;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const std::size_t a = loop[i];
            const std::size_t b = loop[(i + 1) % loop.size()];
            const auto key = std::minmax(a, b);
            auto [it, inserted] = face_of_edge.try_emplace({key.first, key.second}, faces_.size());
            if (inserted) {
                Face f;
                f.vertices = {a, b};
                const Point d = vertices_[b] - vertices_[a];
                f.measure = d.norm();
                f.diameter = f.measure;
                if (f.measure <= 0.0)
                    throw MeshError("zero-length edge in cell " + std::to_string(c));
                f.barycenter = 0.5 * (vertices_[a] + vertices_[b]);
                faces_.push_back(f);
            }
            Face& f = faces_[it->second];
            if (f.cells.size() == 2)
                throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b)
                                + ") shared by more than two cells");
            f.cells.push_back(c);
            // counter-clockwise loop: outward normal is the tangent rotated clockwise
            const Point t = (vertices_[b] - vertices_[a]).normalized();
            f.normals.emplace_back(t.y(), -t.x());
            cell.faces.push_back(it->second);
        }
    }
    for (auto& f : faces_)
        f.boundary = f.cells.size() == 1;
}

std::size_t PolytopalMesh::num_interfaces() const
{
    return static_cast<std::size_t>(
        std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return !f.boundary; }));
}

double PolytopalMesh::h() const
{
    double h = 0.0;
    for (const auto& c : cells_)
        h = std::max(h, c.diameter);
    return h;
}

double PolytopalMesh::measure() const
{
    double m = 0.0;
    for (const auto& c : cells_)
        m += c.measure;
    return m;
}

const Point& PolytopalMesh::normal(std::size_t cell, std::size_t face) const
{
    const Face& f = faces_[face];
    for (std::size_t i = 0; i < f.cells.size(); ++i)
        if (f.cells[i] == cell)
            return f.normals[i];
    throw MeshError("face " + std::to_string(face) + " is not incident to cell "
                    + std::to_string(cell));
}

double PolytopalMesh::stabilization_length(std::size_t cell, std::size_t face) const
{
    return cells_[cell].diameter;
}

} // namespace hho
