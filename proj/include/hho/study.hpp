#pragma once

#include "hho/analysis.hpp"
#include "hho/mesh.hpp"
#include "hho/solver.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hho {

enum class MeshFamily { Interval, Square, TriSquare, LShape, Hex, Disk, File };

MeshFamily parse_family(const std::string& name);
std::string to_string(MeshFamily family);

/// Families indexed by the subdivision count N rather than a refinement level.
bool uses_subdivisions(MeshFamily family);
/// Domain a family discretizes; none for mesh files.
std::optional<Domain> family_domain(MeshFamily family);

/// Mesh of `family` at `level`: N for the subdivision families, the refinement
/// level for hex and disk, and the number of uniform refinements of the file
/// mesh for the file family.
PolytopalMesh build_family_mesh(MeshFamily family, std::size_t level,
                                const std::filesystem::path& mesh_file = {});

/// Stabilization parameter: a positive value or "auto" (2k + 3).
struct EtaSpec {
    bool automatic = false;
    double value = 1.0;

    static EtaSpec parse(const std::string& text);
    double resolve(int k) const { return automatic ? 2.0 * k + 3.0 : value; }
};

struct StudyConfig {
    MeshFamily family = MeshFamily::Interval;
    std::filesystem::path mesh_file;
    std::optional<Domain> domain;  ///< overrides the family's domain
    int degree = 0;
    EtaSpec eta;
    std::vector<std::size_t> levels;
    std::size_t modes = 1;
    std::optional<int> quad_order; ///< error and load quadrature; default 2k + 6
    EigenOptions eigen;

    static constexpr int max_degree = 3;

    /// Throws ConfigError on k outside [0, 3], m < 1, empty levels or a
    /// missing mesh file.
    void validate() const;
    std::optional<Domain> resolved_domain() const;
    int error_quadrature_order() const { return quad_order.value_or(2 * degree + 6); }
};

struct StudyRow {
    std::size_t level;
    double h;
    int k;
    double eta;
    std::size_t mode;
    double lambda_h;
    std::optional<double> lambda_exact;
    std::optional<double> rel_err;
    std::optional<double> order;
};

struct ConvergenceStudy {
    StudyConfig config;
    double eta;
    std::vector<StudyRow> rows;  ///< level-major, modes ascending

    /// Rows of one mode (1-based) in level order.
    std::vector<StudyRow> mode_rows(std::size_t mode) const;
};

/// Eigenvalue study over all configured levels, coarse to fine.
ConvergenceStudy run_eigen_study(const StudyConfig& config);

/// Shortest decimal string that parses back to the same double.
std::string format_shortest(double value);

inline constexpr const char* csv_header = "level,h,k,eta,mode,lambda_h,lambda_exact,rel_err,order";

void write_csv(const ConvergenceStudy& study, std::ostream& out);
/// One line per level with error/order pairs per mode.
void write_study_table(const ConvergenceStudy& study, std::ostream& out);
/// Eigenvalues and relative errors of every level, 6 significant digits.
void write_eigen_table(const ConvergenceStudy& study, std::ostream& out);

enum class ManufacturedSolution { Sine, Zero };

ManufacturedSolution parse_manufactured(const std::string& name);

struct SourceRow {
    std::size_t level;
    double h;
    double h1_error;
    std::optional<double> order;
};

/// Source problem -Laplace u = phi with u = sin(pi x) (interval) or
/// sin(pi x) sin(pi y) (square), or the trivial u = 0. Errors are the
/// reconstruction H1-seminorm errors.
std::vector<SourceRow> run_source_study(const StudyConfig& config,
                                        ManufacturedSolution solution = ManufacturedSolution::Sine);

void write_source_csv(const std::vector<SourceRow>& rows, int k, double eta, std::ostream& out);
void write_source_table(const std::vector<SourceRow>& rows, std::ostream& out);

} // namespace hho
