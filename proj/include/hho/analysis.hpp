#pragma once

#include "hho/assembly.hpp"
#include "hho/basis.hpp"
#include "hho/mesh.hpp"
#include "hho/solver.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hho {

enum class Domain { Interval, Square, LShape, Disk };

Domain parse_domain(const std::string& name);
std::string to_string(Domain domain);

using GradientFunction = std::function<Point(const Point&)>;

/// One exact eigenpair of the Dirichlet Laplacian, L2-normalized. Entries
/// without a reference value (L-shape modes other than 1 and 3) have no
/// eigenvalue; entries with a value but no closed form have no function.
struct ExactEigenpair {
    std::optional<double> eigenvalue;
    ScalarFunction value;
    GradientFunction gradient;
    int multiplicity = 1;
    /// L2-orthonormal basis of the whole eigenspace (this pair included); may
    /// reach beyond the requested count when the last eigenvalue is repeated.
    std::vector<std::pair<ScalarFunction, GradientFunction>> eigenspace;

    bool has_function() const { return static_cast<bool>(value); }
};

/// First `count` exact eigenpairs, ascending, multiplicities expanded.
std::vector<ExactEigenpair> exact_spectrum(Domain domain, std::size_t count);

/// Reference first eigenvalue of the L-shaped domain (0,2)^2 \ [1,2]^2.
inline constexpr double lshape_first_eigenvalue = 9.6397238440219;

/// Bessel function of the first kind J_n(x), n >= 0.
double bessel_j(int n, double x);
/// m-th positive zero of J_n.
double bessel_zero(int n, int m);

/// Sorted-order pairing of discrete and exact eigenvalues.
struct ModeError {
    std::size_t mode;    ///< 1-based
    double lambda_h;
    std::optional<double> lambda_exact;
    std::optional<double> relative_error;
};
std::vector<ModeError> match_and_errors(const Spectrum& spectrum,
                                        const std::vector<ExactEigenpair>& exact);

/// (sum_K ||grad u - grad p_K(u_K)||^2_K)^(1/2) for local unknowns given on
/// the whole mesh (boundary face values are zero).
double h1_reconstruction_error(const PolytopalMesh& mesh, const GlobalBlocks& blocks,
                               const Eigen::VectorXd& cell_values,
                               const Eigen::VectorXd& face_values,
                               const GradientFunction& exact_gradient, int quad_order);

/// H1-seminorm eigenfunction error of mode `mode` (0-based) against the exact
/// eigenpair at the same sorted position. For repeated exact eigenvalues the
/// reference is the normalized L2 projection of the discrete cell function
/// onto the exact eigenspace. Otherwise the discrete mode is sign-aligned
/// with the exact function.
double h1_eigenfunction_error(const PolytopalMesh& mesh, const GlobalBlocks& blocks,
                              const Spectrum& spectrum, std::size_t mode,
                              const std::vector<ExactEigenpair>& exact, int quad_order);

/// log2(e_l / e_{l+1}) between consecutive entries; the first entry, and any
/// pair whose finer error is zero or below machine precision, has no order.
std::vector<std::optional<double>> observed_orders(const std::vector<double>& errors);

/// Errors at or below this level are roundoff; no order is reported.
inline constexpr double order_error_floor = 10.0 * std::numeric_limits<double>::epsilon();

} // namespace hho
