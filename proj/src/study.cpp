#include "hho/study.hpp"
#include "hho/assembly.hpp"
#include "hho/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <system_error>

namespace hho {

namespace {

std::string optional_field(const std::optional<double>& v)
{
    return v ? format_shortest(*v) : std::string();
}

std::string fixed(double value, const char* format)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, format, value);
    return buffer;
}

} // namespace

MeshFamily parse_family(const std::string& name)
{
    if (name == "interval")
        return MeshFamily::Interval;
    if (name == "square")
        return MeshFamily::Square;
    if (name == "tri-square")
        return MeshFamily::TriSquare;
    if (name == "lshape")
        return MeshFamily::LShape;
    if (name == "hex")
        return MeshFamily::Hex;
    if (name == "disk")
        return MeshFamily::Disk;
    if (name == "file")
        return MeshFamily::File;
    throw ConfigError("unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family)
{
    switch (family) {
    case MeshFamily::Interval: return "interval";
    case MeshFamily::Square: return "square";
    case MeshFamily::TriSquare: return "tri-square";
    case MeshFamily::LShape: return "lshape";
    case MeshFamily::Hex: return "hex";
    case MeshFamily::Disk: return "disk";
    case MeshFamily::File: return "file";
    }
    return "unknown";
}

bool uses_subdivisions(MeshFamily family)
{
    return family == MeshFamily::Interval || family == MeshFamily::Square
           || family == MeshFamily::TriSquare || family == MeshFamily::LShape;
}

std::optional<Domain> family_domain(MeshFamily family)
{
    switch (family) {
    case MeshFamily::Interval: return Domain::Interval;
    case MeshFamily::Square:
    case MeshFamily::TriSquare:
    case MeshFamily::Hex: return Domain::Square;
    case MeshFamily::LShape: return Domain::LShape;
    case MeshFamily::Disk: return Domain::Disk;
    case MeshFamily::File: return std::nullopt;
    }
    return std::nullopt;
}

PolytopalMesh build_family_mesh(MeshFamily family, std::size_t level,
                                const std::filesystem::path& mesh_file)
{
    switch (family) {
    case MeshFamily::Interval: return build_uniform_interval(level);
    case MeshFamily::Square: return build_uniform_square(level);
    case MeshFamily::TriSquare: return build_triangular_square(level);
    case MeshFamily::LShape: return build_lshape(level);
    case MeshFamily::Hex: return build_hexagonal(level);
    case MeshFamily::Disk: return build_disk(level);
    case MeshFamily::File: {
        PolytopalMesh mesh = load_mesh(mesh_file);
        for (std::size_t i = 0; i < level; ++i)
            mesh = refine_uniform(mesh);
        return mesh;
    }
    }
    throw ConfigError("unknown mesh family");
}

EtaSpec EtaSpec::parse(const std::string& text)
{
    if (text == "auto")
        return {true, 0.0};
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !(value > 0.0) || !std::isfinite(value))
        throw ConfigError("eta must be a positive number or 'auto', got '" + text + "'");
    return {false, value};
}

void StudyConfig::validate() const
{
    if (degree < 0 || degree > max_degree)
        throw ConfigError("degree must lie in [0, " + std::to_string(max_degree) + "], got "
                          + std::to_string(degree));
    if (modes < 1)
        throw ConfigError("at least one mode must be requested");
    if (levels.empty())
        throw ConfigError("no mesh levels given");
    if (uses_subdivisions(family))
        for (std::size_t n : levels)
            if (n == 0)
                throw ConfigError("N must be at least 1");
    if (family == MeshFamily::File && mesh_file.empty())
        throw ConfigError("the file family needs --mesh-file");
    if (quad_order && *quad_order < 0)
        throw ConfigError("quadrature order must be nonnegative");
    if (!eta.automatic && !(eta.value > 0.0))
        throw ConfigError("eta must be positive");
}

std::optional<Domain> StudyConfig::resolved_domain() const
{
    return domain ? domain : family_domain(family);
}

std::vector<StudyRow> ConvergenceStudy::mode_rows(std::size_t mode) const
{
    std::vector<StudyRow> out;
    for (const auto& r : rows)
        if (r.mode == mode)
            out.push_back(r);
    return out;
}

ConvergenceStudy run_eigen_study(const StudyConfig& config)
{
    config.validate();
    ConvergenceStudy study{config, config.eta.resolve(config.degree), {}};
    const auto domain = config.resolved_domain();
    const std::vector<ExactEigenpair> exact =
        domain ? exact_spectrum(*domain, config.modes) : std::vector<ExactEigenpair>{};

    for (std::size_t level : config.levels) {
        const PolytopalMesh mesh = build_family_mesh(config.family, level, config.mesh_file);
        const GlobalBlocks blocks = assemble(mesh, config.degree, study.eta);
        const Spectrum spectrum = compute_spectrum(blocks, config.modes, config.eigen);
        std::vector<ExactEigenpair> reference = exact;
        reference.resize(config.modes);
        for (const ModeError& e : match_and_errors(spectrum, reference))
            study.rows.push_back({level, mesh.h(), config.degree, study.eta, e.mode, e.lambda_h,
                                  e.lambda_exact, e.relative_error, std::nullopt});
    }

    for (std::size_t mode = 1; mode <= config.modes; ++mode) {
        std::vector<StudyRow*> series;
        for (auto& r : study.rows)
            if (r.mode == mode)
                series.push_back(&r);
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (!series[i]->rel_err || !series[i - 1]->rel_err)
                continue;
            series[i]->order = observed_orders({*series[i - 1]->rel_err, *series[i]->rel_err})[1];
        }
    }
    return study;
}

std::string format_shortest(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc())
        throw Error("cannot format floating-point value");
    return std::string(buffer, ptr);
}

void write_csv(const ConvergenceStudy& study, std::ostream& out)
{
    out << csv_header << '\n';
    for (const auto& r : study.rows)
        out << r.level << ',' << format_shortest(r.h) << ',' << r.k << ','
            << format_shortest(r.eta) << ',' << r.mode << ',' << format_shortest(r.lambda_h) << ','
            << optional_field(r.lambda_exact) << ',' << optional_field(r.rel_err) << ','
            << optional_field(r.order) << '\n';
}

void write_study_table(const ConvergenceStudy& study, std::ostream& out)
{
    const std::string level_name = uses_subdivisions(study.config.family) ? "N" : "level";
    out << "family " << to_string(study.config.family) << ", k = " << study.config.degree
        << ", eta = " << format_shortest(study.eta) << '\n';
    char line[64];
    std::snprintf(line, sizeof line, "%6s", level_name.c_str());
    out << line;
    for (std::size_t m = 1; m <= study.config.modes; ++m) {
        std::snprintf(line, sizeof line, "  %10s %5s", ("mode " + std::to_string(m)).c_str(), "order");
        out << line;
    }
    out << '\n';
    for (std::size_t i = 0; i < study.rows.size(); i += study.config.modes) {
        std::snprintf(line, sizeof line, "%6zu", study.rows[i].level);
        out << line;
        for (std::size_t m = 0; m < study.config.modes; ++m) {
            const StudyRow& r = study.rows[i + m];
            const std::string err = r.rel_err ? fixed(*r.rel_err, "%.2e") : "-";
            const std::string ord = r.order ? fixed(*r.order, "%.2f") : "-";
            std::snprintf(line, sizeof line, "  %10s %5s", err.c_str(), ord.c_str());
            out << line;
        }
        out << '\n';
    }
}

void write_eigen_table(const ConvergenceStudy& study, std::ostream& out)
{
    std::size_t current = static_cast<std::size_t>(-1);
    for (const auto& r : study.rows) {
        if (r.level != current) {
            current = r.level;
            out << (uses_subdivisions(study.config.family) ? "N = " : "level = ") << r.level
                << ", h = " << fixed(r.h, "%.6g") << ", k = " << r.k
                << ", eta = " << format_shortest(r.eta) << '\n';
            char head[96];
            std::snprintf(head, sizeof head, "%6s %14s %14s %12s\n", "j", "lambda_h", "lambda", "rel_err");
            out << head;
        }
        char line[96];
        const std::string exact = r.lambda_exact ? fixed(*r.lambda_exact, "%.6g") : "-";
        const std::string err = r.rel_err ? fixed(*r.rel_err, "%.6g") : "-";
        std::snprintf(line, sizeof line, "%6zu %14s %14s %12s\n", r.mode,
                      fixed(r.lambda_h, "%.6g").c_str(), exact.c_str(), err.c_str());
        out << line;
    }
}

ManufacturedSolution parse_manufactured(const std::string& name)
{
    if (name == "sine")
        return ManufacturedSolution::Sine;
    if (name == "zero")
        return ManufacturedSolution::Zero;
    throw ConfigError("unknown manufactured solution '" + name + "'");
}

std::vector<SourceRow> run_source_study(const StudyConfig& config, ManufacturedSolution solution)
{
    config.validate();
    constexpr double pi = std::numbers::pi;
    const auto domain = config.resolved_domain();
    if (!domain || (*domain != Domain::Interval && *domain != Domain::Square))
        throw ConfigError("manufactured source solutions exist for the interval and the square only");

    ScalarFunction phi;
    GradientFunction gradient;
    if (solution == ManufacturedSolution::Zero) {
        phi = [](const Point&) { return 0.0; };
        gradient = [](const Point&) -> Point { return Point::Zero(); };
    } else if (*domain == Domain::Interval) {
        phi = [](const Point& x) { return pi * pi * std::sin(pi * x.x()); };
        gradient = [](const Point& x) -> Point { return Point(pi * std::cos(pi * x.x()), 0.0); };
    } else {
        phi = [](const Point& x) { return 2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); };
        gradient = [](const Point& x) -> Point {
            return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                         pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
        };
    }

    const double eta = config.eta.resolve(config.degree);
    const int q = config.error_quadrature_order();
    std::vector<SourceRow> rows;
    for (std::size_t level : config.levels) {
        const PolytopalMesh mesh = build_family_mesh(config.family, level, config.mesh_file);
        const GlobalBlocks blocks = assemble(mesh, config.degree, eta);
        const SourceSolution u = solve_source(blocks, assemble_rhs(mesh, config.degree, phi, q));
        const double error = h1_reconstruction_error(mesh, blocks, u.cell, u.face, gradient, q);
        rows.push_back({level, mesh.h(), error, std::nullopt});
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        rows[i].order = observed_orders({rows[i - 1].h1_error, rows[i].h1_error})[1];
    return rows;
}

void write_source_csv(const std::vector<SourceRow>& rows, int k, double eta, std::ostream& out)
{
    out << "level,h,k,eta,h1_err,order\n";
    for (const auto& r : rows)
        out << r.level << ',' << format_shortest(r.h) << ',' << k << ',' << format_shortest(eta)
            << ',' << format_shortest(r.h1_error) << ',' << optional_field(r.order) << '\n';
}

void write_source_table(const std::vector<SourceRow>& rows, std::ostream& out)
{
    char line[96];
    std::snprintf(line, sizeof line, "%6s %12s %12s %6s\n", "level", "h", "H1 error", "order");
    out << line;
    for (const auto& r : rows) {
        const std::string ord = r.order ? fixed(*r.order, "%.2f") : "-";
        std::snprintf(line, sizeof line, "%6zu %12.4e %12.4e %6s\n", r.level, r.h, r.h1_error,
                      ord.c_str());
        out << line;
    }
}

} // namespace hho
