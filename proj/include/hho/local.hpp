#pragma once

#include "hho/basis.hpp"
#include "hho/mesh.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace hho {

/// Local unknowns of one cell: the cell block first, then one block per face
/// in the cell's local face order.
struct LocalDofLayout {
    std::size_t cell_dofs = 0;
    std::vector<std::size_t> face_offsets;
    std::vector<std::size_t> face_dofs;
    std::size_t total = 0;

    LocalDofLayout() = default;
    LocalDofLayout(const PolytopalMesh& mesh, std::size_t cell, int k);
};

/// Matrices of the local HHO operators on one cell, all acting on local
/// unknown vectors ordered as in LocalDofLayout.
struct LocalOperators {
    LocalDofLayout layout;
    Eigen::MatrixXd reconstruction;             ///< coefficients in the degree-(k+1) cell basis
    std::vector<Eigen::MatrixXd> stabilization; ///< per local face, coefficients in the face basis
    std::vector<Eigen::MatrixXd> face_mass;     ///< per local face
    std::vector<double> tau;                    ///< eta / h_F per local face
    Eigen::MatrixXd stiffness;                  ///< n x n
    Eigen::MatrixXd mass;                       ///< cell block only
};

/// Quadrature order used for every polynomial-times-polynomial integrand of
/// the local operators.
inline int operator_quadrature_order(int k) { return 2 * (k + 1); }

/// Reduction of f: L2 projections onto the cell and each face.
Eigen::VectorXd local_reduction(const PolytopalMesh& mesh, std::size_t cell, int k,
                                const ScalarFunction& f, int quad_order);

/// Potential reconstruction p = R v, with mean value matching the cell unknown.
Eigen::MatrixXd reconstruction_operator(const PolytopalMesh& mesh, std::size_t cell, int k);

/// Face-wise stabilization matrices S_F built from a reconstruction matrix.
std::vector<Eigen::MatrixXd> stabilization_operator(const PolytopalMesh& mesh, std::size_t cell,
                                                    int k, const Eigen::MatrixXd& reconstruction);

Eigen::MatrixXd local_stiffness(const PolytopalMesh& mesh, std::size_t cell, int k, double eta);
Eigen::MatrixXd local_mass(const PolytopalMesh& mesh, std::size_t cell, int k);

/// All of the above in one pass.
LocalOperators build_local_operators(const PolytopalMesh& mesh, std::size_t cell, int k,
                                     double eta);

/// Unknowns on every cell and every face of the mesh (boundary faces included),
/// blocks laid out by cell index and face index.
struct HhoVector {
    Eigen::VectorXd cell;
    Eigen::VectorXd face;
};

/// Gathers the local unknown vector of `cell` from a mesh-wide vector.
Eigen::VectorXd gather_local(const PolytopalMesh& mesh, std::size_t cell, int k,
                             const HhoVector& v);

/// Discrete H1-like seminorm: sum over cells of ||grad v_K||^2 plus the
/// tau-weighted squared trace mismatch ||v_K - v_F||^2 over the cell faces.
double hho_seminorm(const PolytopalMesh& mesh, int k, const HhoVector& v, double eta = 1.0);

} // namespace hho
