#include "hho/error.hpp"
#include "hho/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

namespace hho {

namespace {

void require_positive(std::size_t n, const char* what)
{
    if (n == 0)
        throw ConfigError(std::string(what) + ": N must be at least 1");
}

/// Drops unreferenced vertices and renumbers cells accordingly.
PolytopalMesh compact(int dim, const std::vector<Point>& vertices,
                      std::vector<std::vector<std::size_t>> cells)
{
    constexpr auto unused = static_cast<std::size_t>(-1);
    std::vector<std::size_t> remap(vertices.size(), unused);
    std::vector<Point> kept;
    for (auto& cell : cells) {
        for (auto& v : cell) {
            if (remap[v] == unused) {
                remap[v] = kept.size();
                kept.push_back(vertices[v]);
            }
            v = remap[v];
        }
    }
    return PolytopalMesh(dim, std::move(kept), std::move(cells));
}

} // namespace

PolytopalMesh build_uniform_interval(std::size_t n)
{
    require_positive(n, "build_uniform_interval");
    std::vector<Point> vertices;
    for (std::size_t i = 0; i <= n; ++i)
        vertices.emplace_back(static_cast<double>(i) / static_cast<double>(n), 0.0);
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
        cells.push_back({i, i + 1});
    return PolytopalMesh(1, std::move(vertices), std::move(cells));
}

PolytopalMesh build_uniform_square(std::size_t n)
{
    require_positive(n, "build_uniform_square");
    const auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
    std::vector<Point> vertices;
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t i = 0; i <= n; ++i)
            vertices.emplace_back(static_cast<double>(i) / static_cast<double>(n),
                                  static_cast<double>(j) / static_cast<double>(n));
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return PolytopalMesh(2, std::move(vertices), std::move(cells));
}

PolytopalMesh build_triangular_square(std::size_t n, const Point& origin, double extent)
{
    require_positive(n, "build_triangular_square");
    if (!(extent > 0.0))
        throw ConfigError("build_triangular_square: extent must be positive");
    const auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
    std::vector<Point> vertices;
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t i = 0; i <= n; ++i)
            vertices.push_back(origin
                               + extent
                                     * Point(static_cast<double>(i) / static_cast<double>(n),
                                             static_cast<double>(j) / static_cast<double>(n)));
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return PolytopalMesh(2, std::move(vertices), std::move(cells));
}

PolytopalMesh build_lshape(std::size_t n)
{
    require_positive(n, "build_lshape");
    // Triangulate the (2n x 2n) grid of (0,2)^2 and skip the upper-right square;
    // this is the three unit-square meshes with shared edges merged.
    const std::size_t m = 2 * n;
    const auto id = [m](std::size_t i, std::size_t j) { return j * (m + 1) + i; };
    std::vector<Point> vertices;
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i <= m; ++i)
            vertices.emplace_back(static_cast<double>(i) / static_cast<double>(n),
                                  static_cast<double>(j) / static_cast<double>(n));
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            if (i >= n && j >= n)
                continue;
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return compact(2, vertices, std::move(cells));
}

PolytopalMesh build_hexagonal(std::size_t level)
{
    // Rows of hexagons between zigzag interfaces. Interface j carries 2n+1
    // points at x = t w/2; the point is lowered when it is the bottom tip of a
    // cell in row j and raised when it is the top tip of a cell in row j-1.
    // The two horizontal domain edges use flat interfaces.
    const std::size_t n = std::size_t{6} << level;
    const std::size_t m = std::size_t{7} << level;
    const double w = 1.0 / static_cast<double>(n);
    const double row = 1.0 / static_cast<double>(m);
    const double zig = row / 6.0;
    const std::size_t stride = 2 * n + 1;
    const auto id = [stride](std::size_t t, std::size_t j) { return j * stride + t; };

    std::vector<Point> vertices;
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t t = 0; t <= 2 * n; ++t) {
            double y = static_cast<double>(j) * row;
            if (j != 0 && j != m)
                y += ((t + j) % 2 == 1) ? -zig : zig;
            vertices.emplace_back(0.5 * w * static_cast<double>(t), y);
        }

    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<std::pair<std::size_t, std::size_t>> spans;
        if (r % 2 == 0) {
            for (std::size_t i = 0; i < n; ++i)
                spans.emplace_back(2 * i, 2 * i + 2);
        } else {
            spans.emplace_back(0, 1);
            for (std::size_t i = 1; i < n; ++i)
                spans.emplace_back(2 * i - 1, 2 * i + 1);
            spans.emplace_back(2 * n - 1, 2 * n);
        }
        const bool flat_bottom = r == 0;
        const bool flat_top = r + 1 == m;
        for (auto [tl, tr] : spans) {
            std::vector<std::size_t> loop;
            for (std::size_t t = tl; t <= tr; ++t)
                if (!flat_bottom || t == tl || t == tr)
                    loop.push_back(id(t, r));
            for (std::size_t t = tr + 1; t-- > tl;)
                if (!flat_top || t == tl || t == tr)
                    loop.push_back(id(t, r + 1));
            cells.push_back(std::move(loop));
        }
    }
    return compact(2, vertices, std::move(cells));
}

PolytopalMesh build_disk(std::size_t level)
{
    const std::size_t rings = std::size_t{4} << level;
    std::vector<Point> vertices{Point::Zero()};
    std::vector<std::size_t> ring_start{0};
    std::vector<std::size_t> ring_size{1};
    for (std::size_t i = 1; i <= rings; ++i) {
        ring_start.push_back(vertices.size());
        ring_size.push_back(6 * i);
        const double r = static_cast<double>(i) / static_cast<double>(rings);
        for (std::size_t j = 0; j < 6 * i; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j)
                                 / static_cast<double>(6 * i);
            vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }

    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t i = 1; i <= rings; ++i) {
        const std::size_t p = ring_size[i - 1], q = ring_size[i];
        const auto inner = [&](std::size_t j) { return ring_start[i - 1] + j % p; };
        const auto outer = [&](std::size_t j) { return ring_start[i] + j % q; };
        // the center is a single vertex: only outer steps, a fan
        std::size_t a = p == 1 ? 1 : 0, b = 0;
        while (a < p || b < q) {
            const double next_a = static_cast<double>(a + 1) / static_cast<double>(p);
            const double next_b = static_cast<double>(b + 1) / static_cast<double>(q);
            if (b < q && (a >= p || next_b <= next_a)) {
                cells.push_back({inner(a), outer(b), outer(b + 1)});
                ++b;
            } else {
                cells.push_back({inner(a), outer(b), inner(a + 1)});
                ++a;
            }
        }
    }
    return PolytopalMesh(2, std::move(vertices), std::move(cells));
}

PolytopalMesh refine_uniform(const PolytopalMesh& mesh)
{
    std::vector<Point> vertices = mesh.vertices();
    std::vector<std::vector<std::size_t>> cells;

    if (mesh.dim() == 1) {
        for (const auto& cell : mesh.cells()) {
            const std::size_t a = cell.vertices[0], b = cell.vertices[1];
            const std::size_t mid = vertices.size();
            vertices.push_back(0.5 * (vertices[a] + vertices[b]));
            cells.push_back({a, mid});
            cells.push_back({mid, b});
        }
        return PolytopalMesh(1, std::move(vertices), std::move(cells));
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    const auto mid = [&](std::size_t a, std::size_t b) {
        const auto key = std::minmax(a, b);
        auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, vertices.size());
        if (inserted)
            vertices.push_back(0.5 * (vertices[a] + vertices[b]));
        return it->second;
    };
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& v = mesh.cell(c).vertices;
        if (v.size() != 3)
            throw MeshError("unsupported refinement: cell " + std::to_string(c) + " has "
                            + std::to_string(v.size()) + " vertices, only triangles refine");
        const std::size_t m01 = mid(v[0], v[1]), m12 = mid(v[1], v[2]), m20 = mid(v[2], v[0]);
        cells.push_back({v[0], m01, m20});
        cells.push_back({m01, v[1], m12});
        cells.push_back({m20, m12, v[2]});
        cells.push_back({m01, m12, m20});
    }
    return PolytopalMesh(2, std::move(vertices), std::move(cells));
}

} // namespace hho
