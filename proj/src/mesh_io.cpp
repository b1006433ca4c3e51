#include "hho/error.hpp"
#include "hho/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

namespace hho {

namespace {

constexpr double vertex_tolerance = 1e-12;

void reject_duplicate_vertices(const std::vector<Point>& vertices)
{
    std::vector<std::size_t> order(vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return vertices[a].x() < vertices[b].x();
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Point& p = vertices[order[i]];
            const Point& q = vertices[order[j]];
            if (q.x() - p.x() > vertex_tolerance)
                break;
            if (std::abs(q.y() - p.y()) <= vertex_tolerance)
                throw MeshError("duplicate vertices " + std::to_string(order[i]) + " and "
                                + std::to_string(order[j]));
        }
    }
}

} // namespace

PolytopalMesh load_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open mesh file " + path.string());

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MeshError("malformed mesh file " + path.string() + ": " + e.what());
    }

    try {
        const int dim = doc.at("dim").get<int>();
        if (dim != 1 && dim != 2)
            throw MeshError("mesh dimension must be 1 or 2");

        std::vector<Point> vertices;
        for (const auto& v : doc.at("vertices")) {
            if (!v.is_array() || v.empty() || v.size() > 2)
                throw MeshError("vertex entries must be arrays of 1 or 2 coordinates");
            if (dim == 2 && v.size() != 2)
                throw MeshError("2D vertices need two coordinates");
            vertices.emplace_back(v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0);
        }
        reject_duplicate_vertices(vertices);

        std::vector<std::vector<std::size_t>> cells;
        for (const auto& c : doc.at("cells")) {
            std::vector<std::size_t> loop;
            for (const auto& v : c) {
                const auto idx = v.get<long long>();
                if (idx < 0 || static_cast<std::size_t>(idx) >= vertices.size())
                    throw MeshError("cell references vertex index " + std::to_string(idx)
                                    + " out of range");
                loop.push_back(static_cast<std::size_t>(idx));
            }
            cells.push_back(std::move(loop));
        }
        if (cells.empty())
            throw MeshError("mesh file has an empty cell list");
        return PolytopalMesh(dim, std::move(vertices), std::move(cells));
    } catch (const nlohmann::json::exception& e) {
        throw MeshError("malformed mesh file " + path.string() + ": " + e.what());
    }
}

void save_mesh(const PolytopalMesh& mesh, const std::filesystem::path& path)
{
    nlohmann::json doc;
    doc["dim"] = mesh.dim();
    auto& vertices = doc["vertices"] = nlohmann::json::array();
    for (const auto& v : mesh.vertices()) {
        if (mesh.dim() == 1)
            vertices.push_back({v.x()});
        else
            vertices.push_back({v.x(), v.y()});
    }
    auto& cells = doc["cells"] = nlohmann::json::array();
    for (const auto& c : mesh.cells())
        cells.push_back(c.vertices);

    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write mesh file " + path.string());
    out << doc.dump() << '\n';
}

} // namespace hho
