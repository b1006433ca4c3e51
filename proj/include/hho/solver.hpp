#pragma once

#include "hho/assembly.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace hho {

/// Cell and face unknowns of the discrete source problem.
struct SourceSolution {
    Eigen::VectorXd cell;
    Eigen::VectorXd face;
};

/// Static condensation of the cell unknowns: factors the face Schur
/// complement K_FF = A_FF - A_FK A_KK^{-1} A_KF once and solves the block
/// system for any cell right-hand side. Keeps a reference to `blocks`.
class FaceCondensation {
public:
    explicit FaceCondensation(const GlobalBlocks& blocks);

    SourceSolution solve(const Eigen::VectorXd& rhs) const;
    /// Cell parts of the solutions for several right-hand sides (columns).
    Eigen::MatrixXd solve_cells(const Eigen::MatrixXd& rhs) const;

    const Eigen::SparseMatrix<double>& schur_complement() const { return k_ff_; }

private:
    Eigen::MatrixXd apply_a_kk_inverse(const Eigen::MatrixXd& x) const;

    const GlobalBlocks* blocks_;
    std::vector<Eigen::LLT<Eigen::MatrixXd>> a_kk_factors_;
    Eigen::SparseMatrix<double> k_ff_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> k_ff_factor_;
};

SourceSolution solve_source(const GlobalBlocks& blocks, const Eigen::VectorXd& rhs);

/// Recovers face unknowns from cell unknowns: U_F = -A_FF^{-1} A_FK U_K.
class FaceRecovery {
public:
    explicit FaceRecovery(const GlobalBlocks& blocks);
    Eigen::MatrixXd recover(const Eigen::MatrixXd& cell_values) const;

private:
    const GlobalBlocks* blocks_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> a_ff_factor_;
};

Eigen::VectorXd recover_face_dofs(const GlobalBlocks& blocks, const Eigen::VectorXd& cell_values);

/// Dense K_KK = A_KK - A_KF A_FF^{-1} A_FK.
Eigen::MatrixXd condense_cells(const GlobalBlocks& blocks);

/// Smallest eigenpairs of the pencil (K_KK, B_KK). Eigenvalues ascend; the
/// columns of cell_vectors are B_KK-orthonormal. face_vectors is filled by the
/// routines that know the block system.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd cell_vectors;
    Eigen::MatrixXd face_vectors;

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Dense generalized solve. Uses the blockwise Cholesky factor L of B_KK and
/// the full symmetric eigendecomposition of L^T K_KK^{-1} L, whose largest
/// eigenvalues are the reciprocals of the smallest eigenvalues of the pencil.
Spectrum solve_eigen(const Eigen::MatrixXd& k_kk, const std::vector<Eigen::MatrixXd>& b_kk,
                     std::size_t modes);

/// Reference solve on the full pencil [A_KK A_KF; A_FK A_FF] x = lambda
/// [B_KK 0; 0 0] x without forming any Schur complement. Returns cell and face
/// parts. Dense; intended for small meshes.
Spectrum solve_eigen_full_pencil(const GlobalBlocks& blocks, std::size_t modes);

struct KrylovOptions {
    std::size_t block_size = 4;
    double tolerance = 1e-11;    ///< Ritz residual relative to the Ritz value
    std::size_t max_basis = 400;
    std::uint64_t seed = 20240601;
};

/// Block Krylov iteration with Rayleigh-Ritz on the cell solution operator
/// T = K_KK^{-1} B_KK, applied through FaceCondensation. Never forms K_KK.
Spectrum solve_eigen_krylov(const GlobalBlocks& blocks, std::size_t modes,
                            const KrylovOptions& options = {});

struct EigenOptions {
    std::size_t dense_limit = 600; ///< cell unknowns up to which the dense path is used
    KrylovOptions krylov;
};

/// Smallest eigenpairs with face unknowns recovered and the sign convention
/// applied (largest-magnitude cell entry positive).
Spectrum compute_spectrum(const GlobalBlocks& blocks, std::size_t modes,
                          const EigenOptions& options = {});

/// Flips each mode so that its largest-magnitude cell entry is positive.
void normalize_signs(Spectrum& spectrum);

} // namespace hho
