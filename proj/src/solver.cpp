#include "hho/solver.hpp"
#include "hho/error.hpp"
#include "hho/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace hho {

namespace {

using ColMajorSparse = Eigen::SparseMatrix<double>;

void check_factor(const Eigen::SimplicialLDLT<ColMajorSparse>& factor, const char* what)
{
    if (factor.info() != Eigen::Success)
        throw NumericalError(std::string(what) + ": sparse factorization failed");
    const Eigen::VectorXd d = factor.vectorD();
    if (d.size() == 0)
        return;
    Eigen::Index pivot = 0;
    const double smallest = d.minCoeff(&pivot);
    if (!(smallest > 0.0))
        throw NumericalError(std::string(what) + ": non-positive pivot " + std::to_string(smallest)
                             + " at permuted index " + std::to_string(pivot));
}

Eigen::MatrixXd block_diagonal(const std::vector<Eigen::MatrixXd>& blocks, std::size_t n)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        m.block(offset, offset, b.rows(), b.cols()) = b;
        offset += b.rows();
    }
    return m;
}

void check_modes(std::size_t modes, std::size_t available)
{
    if (modes == 0)
        throw ConfigError("at least one eigenmode must be requested");
    if (modes > available)
        throw ConfigError("requested " + std::to_string(modes) + " eigenmodes but only "
                          + std::to_string(available) + " cell unknowns exist");
}

} // namespace

FaceCondensation::FaceCondensation(const GlobalBlocks& blocks) : blocks_(&blocks)
{
    const auto& dofs = blocks.dofs;
    const std::size_t cells = blocks.a_kk.size();
    a_kk_factors_.resize(cells);
    std::vector<Eigen::MatrixXd> local_schur(cells);
    parallel_for(cells, [&](std::size_t c) {
        auto& llt = a_kk_factors_[c];
        llt.compute(blocks.a_kk[c]);
        if (llt.info() != Eigen::Success)
            throw NumericalError("cell block of cell " + std::to_string(c)
                                 + " is not positive definite");
        const auto& a = blocks.local[c].stiffness;
        const Eigen::Index nc = static_cast<Eigen::Index>(dofs.cell_block);
        const Eigen::Index nf = a.rows() - nc;
        local_schur[c] = a.bottomRightCorner(nf, nf)
                         - a.bottomLeftCorner(nf, nc) * llt.solve(a.topRightCorner(nc, nf));
    });

    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t c = 0; c < cells; ++c) {
        const auto& offsets = dofs.cell_face_offset[c];
        const auto& layout = blocks.local[c].layout;
        const std::size_t nc = layout.cell_dofs;
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            if (!offsets[i])
                continue;
            for (std::size_t j = 0; j < offsets.size(); ++j) {
                if (!offsets[j])
                    continue;
                for (std::size_t r = 0; r < dofs.face_block; ++r)
                    for (std::size_t s = 0; s < dofs.face_block; ++s)
                        t.emplace_back(*offsets[i] + r, *offsets[j] + s,
                                       local_schur[c](layout.face_offsets[i] - nc + r,
                                                      layout.face_offsets[j] - nc + s));
            }
        }
    }
    const auto nf = static_cast<Eigen::Index>(dofs.num_face_dofs);
    k_ff_.resize(nf, nf);
    k_ff_.setFromTriplets(t.begin(), t.end());
    if (nf > 0) {
        k_ff_factor_.compute(k_ff_);
        check_factor(k_ff_factor_, "face Schur complement");
    }
}

Eigen::MatrixXd FaceCondensation::apply_a_kk_inverse(const Eigen::MatrixXd& x) const
{
    Eigen::MatrixXd y(x.rows(), x.cols());
    const auto nc = static_cast<Eigen::Index>(blocks_->dofs.cell_block);
    for (std::size_t c = 0; c < a_kk_factors_.size(); ++c) {
        const auto off = static_cast<Eigen::Index>(blocks_->dofs.cell_offset[c]);
        y.middleRows(off, nc) = a_kk_factors_[c].solve(x.middleRows(off, nc));
    }
    return y;
}

Eigen::MatrixXd FaceCondensation::solve_cells(const Eigen::MatrixXd& rhs) const
{
    if (static_cast<std::size_t>(rhs.rows()) != blocks_->dofs.num_cell_dofs)
        throw ConfigError("right-hand side size does not match the cell unknowns");
    Eigen::MatrixXd cell = apply_a_kk_inverse(rhs);
    if (k_ff_.rows() == 0)
        return cell;
    const Eigen::MatrixXd face = k_ff_factor_.solve(-(blocks_->a_fk * cell));
    return apply_a_kk_inverse(rhs - blocks_->a_kf * face);
}

SourceSolution FaceCondensation::solve(const Eigen::VectorXd& rhs) const
{
    if (static_cast<std::size_t>(rhs.size()) != blocks_->dofs.num_cell_dofs)
        throw ConfigError("right-hand side size does not match the cell unknowns");
    SourceSolution sol;
    const Eigen::VectorXd g = apply_a_kk_inverse(rhs);
    if (k_ff_.rows() == 0) {
        sol.cell = g;
        sol.face = Eigen::VectorXd(0);
        return sol;
    }
    sol.face = k_ff_factor_.solve(-(blocks_->a_fk * g));
    sol.cell = apply_a_kk_inverse(rhs - blocks_->a_kf * sol.face);
    return sol;
}

SourceSolution solve_source(const GlobalBlocks& blocks, const Eigen::VectorXd& rhs)
{
    return FaceCondensation(blocks).solve(rhs);
}

FaceRecovery::FaceRecovery(const GlobalBlocks& blocks) : blocks_(&blocks)
{
    if (blocks.a_ff.rows() > 0) {
        a_ff_factor_.compute(ColMajorSparse(blocks.a_ff));
        check_factor(a_ff_factor_, "face block A_FF");
    }
}

Eigen::MatrixXd FaceRecovery::recover(const Eigen::MatrixXd& cell_values) const
{
    if (blocks_->a_ff.rows() == 0)
        return Eigen::MatrixXd(0, cell_values.cols());
    return a_ff_factor_.solve(-(blocks_->a_fk * cell_values));
}

Eigen::VectorXd recover_face_dofs(const GlobalBlocks& blocks, const Eigen::VectorXd& cell_values)
{
    return FaceRecovery(blocks).recover(cell_values);
}

Eigen::MatrixXd condense_cells(const GlobalBlocks& blocks)
{
    Eigen::MatrixXd k = block_diagonal(blocks.a_kk, blocks.dofs.num_cell_dofs);
    if (blocks.a_ff.rows() > 0) {
        Eigen::SimplicialLDLT<ColMajorSparse> factor(ColMajorSparse(blocks.a_ff));
        check_factor(factor, "face block A_FF");
        const Eigen::MatrixXd x = factor.solve(Eigen::MatrixXd(blocks.a_fk));
        k.noalias() -= blocks.a_kf * x;
    }
    return 0.5 * (k + k.transpose());
}

Spectrum solve_eigen(const Eigen::MatrixXd& k_kk, const std::vector<Eigen::MatrixXd>& b_kk,
                     std::size_t modes)
{
    const auto n = static_cast<std::size_t>(k_kk.rows());
    check_modes(modes, n);

    std::vector<Eigen::MatrixXd> factors;
    for (const auto& b : b_kk) {
        Eigen::LLT<Eigen::MatrixXd> llt(b);
        if (llt.info() != Eigen::Success)
            throw NumericalError("mass block is not positive definite");
        factors.emplace_back(llt.matrixL());
    }
    const Eigen::MatrixXd l = block_diagonal(factors, n);
    if (static_cast<std::size_t>(l.rows()) != n)
        throw ConfigError("mass blocks do not match the stiffness size");

    Eigen::LLT<Eigen::MatrixXd> k_llt(k_kk);
    if (k_llt.info() != Eigen::Success)
        throw NumericalError("condensed stiffness is not positive definite");
    Eigen::MatrixXd t = l.transpose() * k_llt.solve(l);
    t = 0.5 * (t + t.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    if (eig.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge");

    Spectrum s;
    s.eigenvalues.resize(static_cast<Eigen::Index>(modes));
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(modes));
    for (std::size_t j = 0; j < modes; ++j) {
        const auto src = static_cast<Eigen::Index>(n - 1 - j);
        const double mu = eig.eigenvalues()[src];
        if (!(mu > 0.0))
            throw NumericalError("non-positive eigenvalue of the condensed pencil");
        s.eigenvalues[static_cast<Eigen::Index>(j)] = 1.0 / mu;
        z.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(src);
    }
    s.cell_vectors = l.transpose().triangularView<Eigen::Upper>().solve(z);
    s.face_vectors = Eigen::MatrixXd(0, static_cast<Eigen::Index>(modes));
    return s;
}

Spectrum solve_eigen_full_pencil(const GlobalBlocks& blocks, std::size_t modes)
{
    const std::size_t nk = blocks.dofs.num_cell_dofs;
    const std::size_t nf = blocks.dofs.num_face_dofs;
    check_modes(modes, nk);

    const Eigen::MatrixXd a = Eigen::MatrixXd(blocks.full_matrix());
    Eigen::LLT<Eigen::MatrixXd> a_llt(a);
    if (a_llt.info() != Eigen::Success)
        throw NumericalError("full block matrix is not positive definite");

    // Factor the mass as M = W W^T with W = [L_B; 0], then C = R^{-1} W W^T R^{-T}
    // has eigenvalues 1/lambda for the finite spectrum and 0 for the rest.
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nk + nf),
                                              static_cast<Eigen::Index>(nk));
    Eigen::Index offset = 0;
    for (const auto& b : blocks.b_kk) {
        Eigen::LLT<Eigen::MatrixXd> llt(b);
        w.block(offset, offset, b.rows(), b.cols()) = llt.matrixL();
        offset += b.rows();
    }
    const Eigen::MatrixXd y = a_llt.matrixL().solve(w);
    Eigen::MatrixXd c = y * y.transpose();
    c = 0.5 * (c + c.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    if (eig.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge");

    const auto n = static_cast<Eigen::Index>(nk + nf);
    Spectrum s;
    s.eigenvalues.resize(static_cast<Eigen::Index>(modes));
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(modes));
    for (std::size_t j = 0; j < modes; ++j) {
        const Eigen::Index src = n - 1 - static_cast<Eigen::Index>(j);
        const double mu = eig.eigenvalues()[src];
        if (!(mu > 0.0))
            throw NumericalError("non-positive eigenvalue of the full pencil");
        s.eigenvalues[static_cast<Eigen::Index>(j)] = 1.0 / mu;
        x.col(static_cast<Eigen::Index>(j)) = a_llt.matrixU().solve(eig.eigenvectors().col(src));
    }
    // scale to unit B-norm of the cell part
    const SparseMatrix b = blocks.cell_mass();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd u = x.col(j).head(static_cast<Eigen::Index>(nk));
        x.col(j) /= std::sqrt(u.dot(b * u));
    }
    s.cell_vectors = x.topRows(static_cast<Eigen::Index>(nk));
    s.face_vectors = x.bottomRows(static_cast<Eigen::Index>(nf));
    return s;
}

void normalize_signs(Spectrum& spectrum)
{
    for (Eigen::Index j = 0; j < spectrum.cell_vectors.cols(); ++j) {
        Eigen::Index imax = 0;
        spectrum.cell_vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (spectrum.cell_vectors(imax, j) < 0.0) {
            spectrum.cell_vectors.col(j) *= -1.0;
            if (spectrum.face_vectors.cols() > j)
                spectrum.face_vectors.col(j) *= -1.0;
        }
    }
}

Spectrum compute_spectrum(const GlobalBlocks& blocks, std::size_t modes, const EigenOptions& options)
{
    check_modes(modes, blocks.dofs.num_cell_dofs);
    Spectrum s;
    if (blocks.dofs.num_cell_dofs <= options.dense_limit)
        s = solve_eigen(condense_cells(blocks), blocks.b_kk, modes);
    else
        s = solve_eigen_krylov(blocks, modes, options.krylov);
    s.face_vectors = FaceRecovery(blocks).recover(s.cell_vectors);
    normalize_signs(s);
    return s;
}

} // namespace hho
