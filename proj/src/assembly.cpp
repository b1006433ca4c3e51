#include "hho/assembly.hpp"
#include "hho/error.hpp"
#include "hho/parallel.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace hho {

DofMap::DofMap(const PolytopalMesh& mesh, int k)
{
    cell_block = polynomial_dimension(k, mesh.dim());
    face_block = mesh.dim() == 1 ? 1 : polynomial_dimension(k, 1);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        cell_offset.push_back(c * cell_block);
    num_cell_dofs = mesh.num_cells() * cell_block;
    for (const auto& f : mesh.faces()) {
        if (f.boundary) {
            face_offset.emplace_back();
        } else {
            face_offset.emplace_back(num_face_dofs);
            num_face_dofs += face_block;
        }
    }
    for (const auto& cell : mesh.cells()) {
        auto& local = cell_face_offset.emplace_back();
        for (auto f : cell.faces)
            local.push_back(face_offset[f]);
    }
}

GlobalBlocks assemble(const PolytopalMesh& mesh, int k, double eta)
{
    GlobalBlocks blocks;
    blocks.degree = k;
    blocks.eta = eta;
    blocks.dofs = DofMap(mesh, k);
    const auto& dofs = blocks.dofs;

    blocks.local.resize(mesh.num_cells());
    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        blocks.local[c] = build_local_operators(mesh, c, k, eta);
    });

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> kf, ff;
    const std::size_t nc = dofs.cell_block;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& ops = blocks.local[c];
        const auto& a = ops.stiffness;
        blocks.a_kk.push_back(a.topLeftCorner(nc, nc));
        blocks.b_kk.push_back(ops.mass);

        const auto& faces = mesh.cell(c).faces;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const auto gi = dofs.face_offset[faces[i]];
            if (!gi)
                continue;
            const std::size_t li = ops.layout.face_offsets[i];
            for (std::size_t r = 0; r < dofs.face_block; ++r)
                for (std::size_t s = 0; s < nc; ++s)
                    kf.emplace_back(dofs.cell_offset[c] + s, *gi + r, a(s, li + r));
            for (std::size_t j = 0; j < faces.size(); ++j) {
                const auto gj = dofs.face_offset[faces[j]];
                if (!gj)
                    continue;
                const std::size_t lj = ops.layout.face_offsets[j];
                for (std::size_t r = 0; r < dofs.face_block; ++r)
                    for (std::size_t s = 0; s < dofs.face_block; ++s)
                        ff.emplace_back(*gi + r, *gj + s, a(li + r, lj + s));
            }
        }
    }
    blocks.a_kf.resize(static_cast<Eigen::Index>(dofs.num_cell_dofs),
                       static_cast<Eigen::Index>(dofs.num_face_dofs));
    blocks.a_kf.setFromTriplets(kf.begin(), kf.end());
    blocks.a_fk = blocks.a_kf.transpose();
    blocks.a_ff.resize(static_cast<Eigen::Index>(dofs.num_face_dofs),
                       static_cast<Eigen::Index>(dofs.num_face_dofs));
    blocks.a_ff.setFromTriplets(ff.begin(), ff.end());
    return blocks;
}

SparseMatrix GlobalBlocks::full_matrix() const
{
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> t;
    const auto nk = static_cast<Eigen::Index>(dofs.num_cell_dofs);
    for (std::size_t c = 0; c < a_kk.size(); ++c)
        for (Eigen::Index i = 0; i < a_kk[c].rows(); ++i)
            for (Eigen::Index j = 0; j < a_kk[c].cols(); ++j)
                t.emplace_back(dofs.cell_offset[c] + i, dofs.cell_offset[c] + j, a_kk[c](i, j));
    const auto add = [&](const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0) {
        for (Eigen::Index r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it)
                t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
    };
    add(a_kf, 0, nk);
    add(a_fk, nk, 0);
    add(a_ff, nk, nk);
    const auto n = nk + static_cast<Eigen::Index>(dofs.num_face_dofs);
    SparseMatrix full(n, n);
    full.setFromTriplets(t.begin(), t.end());
    return full;
}

SparseMatrix GlobalBlocks::cell_mass() const
{
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> t;
    for (std::size_t c = 0; c < b_kk.size(); ++c)
        for (Eigen::Index i = 0; i < b_kk[c].rows(); ++i)
            for (Eigen::Index j = 0; j < b_kk[c].cols(); ++j)
                t.emplace_back(dofs.cell_offset[c] + i, dofs.cell_offset[c] + j, b_kk[c](i, j));
    const auto n = static_cast<Eigen::Index>(dofs.num_cell_dofs);
    SparseMatrix b(n, n);
    b.setFromTriplets(t.begin(), t.end());
    return b;
}

Eigen::VectorXd assemble_rhs(const PolytopalMesh& mesh, int k, const ScalarFunction& phi,
                             int quad_order)
{
    const std::size_t nc = polynomial_dimension(k, mesh.dim());
    Eigen::VectorXd rhs(mesh.num_cells() * nc);
    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        const CellBasis cb(mesh, c, k);
        rhs.segment(c * nc, nc) = moments(cb, phi, cell_rule(mesh, c, quad_order));
    });
    return rhs;
}

void dump_matrices(const GlobalBlocks& blocks, const std::filesystem::path& prefix)
{
    const auto write = [](const SparseMatrix& m, const std::filesystem::path& path) {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("cannot write matrix dump " + path.string());
        char line[96];
        for (Eigen::Index r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
                std::snprintf(line, sizeof line, "%lld %lld %.17g\n",
                              static_cast<long long>(it.row()), static_cast<long long>(it.col()),
                              it.value());
                out << line;
            }
    };
    write(blocks.full_matrix(), prefix.string() + "_A.txt");
    write(blocks.cell_mass(), prefix.string() + "_B.txt");
}

} // namespace hho
