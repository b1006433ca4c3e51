// Command-line driver: mesh generation, eigenvalue solves, convergence
// studies and manufactured source problems.

#include "hho/assembly.hpp"
#include "hho/error.hpp"
#include "hho/study.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hho;

struct Options {
    std::string family = "interval";
    std::string mesh_file;
    std::string domain;
    std::string n;
    std::string levels;
    int degree = 0;
    std::string eta = "1";
    std::size_t modes = 1;
    int quad_order = -1;
    std::string out;
    std::string dump_matrices;
    std::string solution = "sine";
};

std::size_t parse_count(const std::string& text)
{
    std::size_t value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ConfigError("expected a nonnegative integer, got '" + text + "'");
    return value;
}

std::vector<std::size_t> parse_list(const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ','))
        out.push_back(parse_count(item));
    return out;
}

/// "a..b" or a single level.
std::vector<std::size_t> parse_range(const std::string& text)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        return {parse_count(text)};
    const std::size_t first = parse_count(text.substr(0, dots));
    const std::size_t last = parse_count(text.substr(dots + 2));
    if (last < first)
        throw ConfigError("empty level range '" + text + "'");
    std::vector<std::size_t> out;
    for (std::size_t l = first; l <= last; ++l)
        out.push_back(l);
    return out;
}

StudyConfig make_config(const Options& o)
{
    StudyConfig c;
    c.family = parse_family(o.family);
    c.mesh_file = o.mesh_file;
    if (!o.domain.empty())
        c.domain = parse_domain(o.domain);
    c.degree = o.degree;
    c.eta = EtaSpec::parse(o.eta);
    c.modes = o.modes;
    if (o.quad_order >= 0)
        c.quad_order = o.quad_order;

    if (!o.n.empty() && !o.levels.empty())
        throw ConfigError("give either --n or --levels, not both");
    if (!o.n.empty()) {
        if (!uses_subdivisions(c.family))
            throw ConfigError("family " + o.family + " is indexed by --levels");
        c.levels = parse_list(o.n);
    } else if (!o.levels.empty()) {
        const auto levels = parse_range(o.levels);
        for (std::size_t l : levels)
            // subdivision families: level l means N = 2^l
            c.levels.push_back(uses_subdivisions(c.family) ? std::size_t{1} << l : l);
    } else if (c.family == MeshFamily::File) {
        c.levels = {0};
    }
    c.validate();
    return c;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream file(path);
    if (!file)
        throw ConfigError("cannot write " + path);
    return file;
}

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--family", o.family, "interval|square|tri-square|lshape|hex|disk|file");
    cmd->add_option("--mesh-file", o.mesh_file, "mesh JSON for --family file");
    cmd->add_option("--domain", o.domain, "interval|square|lshape|disk, for exact references");
    cmd->add_option("--n", o.n, "comma-separated subdivision counts");
    cmd->add_option("--levels", o.levels, "level range L0..L1");
}

void add_solver(CLI::App* cmd, Options& o)
{
    cmd->add_option("--degree", o.degree, "polynomial degree k");
    cmd->add_option("--eta", o.eta, "stabilization parameter or 'auto' (2k+3)");
    cmd->add_option("--quad-order", o.quad_order, "error and load quadrature order");
    cmd->add_option("--out", o.out, "CSV output path");
}

int cmd_mesh(const Options& o)
{
    const StudyConfig c = make_config(o);
    if (c.levels.size() != 1)
        throw ConfigError("mesh expects a single N or level");
    const PolytopalMesh mesh = build_family_mesh(c.family, c.levels.front(), c.mesh_file);
    if (!o.out.empty())
        save_mesh(mesh, o.out);
    std::cout << "cells " << mesh.num_cells() << ", faces " << mesh.num_faces()
              << ", vertices " << mesh.vertices().size() << ", h " << mesh.h() << '\n';
    return 0;
}

int cmd_eigen(const Options& o)
{
    const StudyConfig c = make_config(o);
    if (!o.dump_matrices.empty()) {
        const PolytopalMesh mesh = build_family_mesh(c.family, c.levels.front(), c.mesh_file);
        dump_matrices(assemble(mesh, c.degree, c.eta.resolve(c.degree)), o.dump_matrices);
    }
    const ConvergenceStudy study = run_eigen_study(c);
    write_eigen_table(study, std::cout);
    if (!o.out.empty()) {
        auto file = open_output(o.out);
        write_csv(study, file);
    }
    return 0;
}

int cmd_study(const Options& o)
{
    const StudyConfig c = make_config(o);
    if (c.levels.size() < 2)
        throw ConfigError("a study needs at least two levels");
    const ConvergenceStudy study = run_eigen_study(c);
    write_study_table(study, std::cout);
    if (!o.out.empty()) {
        auto file = open_output(o.out);
        write_csv(study, file);
    }
    return 0;
}

int cmd_source(const Options& o)
{
    const StudyConfig c = make_config(o);
    const auto rows = run_source_study(c, parse_manufactured(o.solution));
    write_source_table(rows, std::cout);
    if (!o.out.empty()) {
        auto file = open_output(o.out);
        write_source_csv(rows, c.degree, c.eta.resolve(c.degree), file);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid high-order discretization of the Laplace eigenvalue problem"};
    app.require_subcommand(1);
    Options o;

    auto* mesh = app.add_subcommand("mesh", "generate a mesh and write it as JSON");
    add_common(mesh, o);
    mesh->add_option("--out", o.out, "mesh JSON output path");

    auto* eigen = app.add_subcommand("eigen", "smallest eigenpairs on one or more meshes");
    add_common(eigen, o);
    add_solver(eigen, o);
    eigen->add_option("--modes", o.modes, "number of eigenpairs");
    eigen->add_option("--dump-matrices", o.dump_matrices, "prefix for matrix dumps of the first mesh");

    auto* study = app.add_subcommand("study", "eigenvalue convergence study");
    add_common(study, o);
    add_solver(study, o);
    study->add_option("--modes", o.modes, "number of eigenpairs");

    auto* source = app.add_subcommand("source", "manufactured source problem");
    add_common(source, o);
    add_solver(source, o);
    source->add_option("--solution", o.solution, "sine|zero");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*mesh)
            return cmd_mesh(o);
        if (*eigen)
            return cmd_eigen(o);
        if (*study)
            return cmd_study(o);
        return cmd_source(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
