#pragma once

#include "hho/basis.hpp"
#include "hho/local.hpp"
#include "hho/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

namespace hho {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Global numbering. Cell unknowns are numbered cell by cell; only interface
/// unknowns are numbered, boundary faces carry the homogeneous Dirichlet value.
struct DofMap {
    std::size_t cell_block = 0;  ///< unknowns per cell
    std::size_t face_block = 0;  ///< unknowns per face
    std::vector<std::size_t> cell_offset;
    std::vector<std::optional<std::size_t>> face_offset;
    /// face_offset of each cell's faces, in local face order
    std::vector<std::vector<std::optional<std::size_t>>> cell_face_offset;
    std::size_t num_cell_dofs = 0;
    std::size_t num_face_dofs = 0;

    DofMap() = default;
    DofMap(const PolytopalMesh& mesh, int k);
};

/// The 2x2 block system [A_KK A_KF; A_FK A_FF] and the cell mass B_KK.
/// A_KK and B_KK are block diagonal and stored as one dense block per cell.
struct GlobalBlocks {
    int degree = 0;
    double eta = 1.0;
    DofMap dofs;
    std::vector<Eigen::MatrixXd> a_kk;
    SparseMatrix a_kf;
    SparseMatrix a_fk;
    SparseMatrix a_ff;
    std::vector<Eigen::MatrixXd> b_kk;
    std::vector<LocalOperators> local;

    /// Full matrix in [cells; faces] ordering.
    SparseMatrix full_matrix() const;
    /// B_KK assembled as a sparse matrix.
    SparseMatrix cell_mass() const;
};

GlobalBlocks assemble(const PolytopalMesh& mesh, int k, double eta);

/// Cell moments (phi, phi_i)_K; the face block of the right-hand side is zero.
Eigen::VectorXd assemble_rhs(const PolytopalMesh& mesh, int k, const ScalarFunction& phi,
                             int quad_order);

/// Writes "row col value" lines (17 significant digits) for the full matrix
/// to `<prefix>_A.txt` and for the cell mass to `<prefix>_B.txt`.
void dump_matrices(const GlobalBlocks& blocks, const std::filesystem::path& prefix);

} // namespace hho
