#include "hho/error.hpp"
#include "hho/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hho {

namespace {

/// Applies the block-diagonal cell mass.
Eigen::MatrixXd apply_mass(const GlobalBlocks& blocks, const Eigen::MatrixXd& x)
{
    Eigen::MatrixXd y(x.rows(), x.cols());
    const auto nc = static_cast<Eigen::Index>(blocks.dofs.cell_block);
    for (std::size_t c = 0; c < blocks.b_kk.size(); ++c) {
        const auto off = static_cast<Eigen::Index>(blocks.dofs.cell_offset[c]);
        y.middleRows(off, nc).noalias() = blocks.b_kk[c] * x.middleRows(off, nc);
    }
    return y;
}

} // namespace

Spectrum solve_eigen_krylov(const GlobalBlocks& blocks, std::size_t modes,
                            const KrylovOptions& options)
{
    const std::size_t n = blocks.dofs.num_cell_dofs;
    if (modes == 0 || modes > n)
        throw ConfigError("requested " + std::to_string(modes) + " eigenmodes but only "
                          + std::to_string(n) + " cell unknowns exist");
    const FaceCondensation solver(blocks);

    const auto ni = static_cast<Eigen::Index>(n);
    const std::size_t max_basis = std::min(n, std::max(options.max_basis, modes + options.block_size));
    const auto cap = static_cast<Eigen::Index>(max_basis);
    const auto block = static_cast<Eigen::Index>(std::max<std::size_t>(1, options.block_size));

    // Q holds a B-orthonormal basis, Z = T Q with T = K_KK^{-1} B_KK, and
    // H = Q^T B Z is the projected (symmetric) operator.
    Eigen::MatrixXd q(ni, cap), z(ni, cap), bq(ni, cap);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cap, cap);
    Eigen::Index size = 0;

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const auto random_vector = [&] {
        Eigen::VectorXd v(ni);
        for (Eigen::Index i = 0; i < ni; ++i)
            v[i] = uniform(rng);
        return v;
    };

    Eigen::MatrixXd next(ni, block);
    for (Eigen::Index j = 0; j < block; ++j)
        next.col(j) = random_vector();

    while (size < cap) {
        // B-orthonormalize the candidate block against the basis and itself
        Eigen::Index added = 0;
        const Eigen::Index room = std::min<Eigen::Index>(next.cols(), cap - size);
        for (Eigen::Index j = 0; j < room; ++j) {
            Eigen::VectorXd v = next.col(j);
            for (int attempt = 0; attempt < 3; ++attempt) {
                const double before = std::sqrt(std::max(0.0, v.dot(apply_mass(blocks, v).col(0))));
                for (int pass = 0; pass < 2; ++pass) {
                    const Eigen::Index s = size + added;
                    if (s > 0)
                        v.noalias() -= q.leftCols(s) * (bq.leftCols(s).transpose() * v);
                }
                const Eigen::VectorXd bv = apply_mass(blocks, v);
                const double norm = std::sqrt(std::max(0.0, v.dot(bv)));
                if (norm > 1e-8 * before && norm > 0.0) {
                    q.col(size + added) = v / norm;
                    bq.col(size + added) = bv / norm;
                    ++added;
                    break;
                }
                v = random_vector();
            }
        }
        if (added == 0)
            break;

        const Eigen::MatrixXd fresh = solver.solve_cells(bq.middleCols(size, added));
        z.middleCols(size, added) = fresh;
        const Eigen::Index s = size + added;
        const Eigen::MatrixXd cross = bq.leftCols(s).transpose() * fresh;
        h.block(0, size, s, added) = cross;
        h.block(size, 0, added, s) = cross.transpose();
        size = s;
        next = fresh;

        if (static_cast<std::size_t>(size) < modes)
            continue;

        Eigen::MatrixXd hs = h.topLeftCorner(size, size);
        hs = 0.5 * (hs + hs.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hs);
        if (eig.info() != Eigen::Success)
            throw NumericalError("projected eigenproblem did not converge");

        const auto m = static_cast<Eigen::Index>(modes);
        Eigen::MatrixXd y(size, m);
        Eigen::VectorXd theta(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            theta[j] = eig.eigenvalues()[size - 1 - j];
            y.col(j) = eig.eigenvectors().col(size - 1 - j);
        }
        const Eigen::MatrixXd ritz = q.leftCols(size) * y;
        const Eigen::MatrixXd residual = z.leftCols(size) * y - ritz * theta.asDiagonal();
        const Eigen::MatrixXd b_residual = apply_mass(blocks, residual);
        bool converged = true;
        for (Eigen::Index j = 0; j < m && converged; ++j) {
            if (!(theta[j] > 0.0))
                throw NumericalError("non-positive Ritz value of the cell solution operator");
            const double r = std::sqrt(std::max(0.0, residual.col(j).dot(b_residual.col(j))));
            converged = r <= options.tolerance * theta[j];
        }
        if (converged || size == ni) {
            Spectrum out;
            out.eigenvalues = theta.cwiseInverse();
            out.cell_vectors = ritz;
            out.face_vectors = Eigen::MatrixXd(0, m);
            return out;
        }
    }
    throw NumericalError("block Krylov eigensolver did not converge within "
                         + std::to_string(max_basis) + " basis vectors");
}

} // namespace hho
