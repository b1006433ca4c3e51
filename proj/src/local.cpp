#include "hho/local.hpp"
#include "hho/error.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace hho {

LocalDofLayout::LocalDofLayout(const PolytopalMesh& mesh, std::size_t cell, int k)
{
    cell_dofs = polynomial_dimension(k, mesh.dim());
    total = cell_dofs;
    const std::size_t per_face = polynomial_dimension(k, mesh.dim() - 1);
    for (std::size_t i = 0; i < mesh.cell(cell).faces.size(); ++i) {
        face_offsets.push_back(total);
        face_dofs.push_back(mesh.dim() == 1 ? 1 : per_face);
        total += face_dofs.back();
    }
}

Eigen::VectorXd local_reduction(const PolytopalMesh& mesh, std::size_t cell, int k,
                                const ScalarFunction& f, int quad_order)
{
    const LocalDofLayout layout(mesh, cell, k);
    Eigen::VectorXd v(layout.total);
    const CellBasis cb(mesh, cell, k);
    v.head(layout.cell_dofs) = l2_project_cell(cb, f, cell_rule(mesh, cell, quad_order)).values;
    const auto& faces = mesh.cell(cell).faces;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const FaceBasis fb(mesh, faces[i], k);
        v.segment(layout.face_offsets[i], layout.face_dofs[i])
            = l2_project_face(fb, f, face_rule(mesh, faces[i], quad_order)).values;
    }
    return v;
}

namespace {

struct CellIntegrals {
    LocalDofLayout layout;
    CellBasis high;                    // degree k+1
    Eigen::MatrixXd high_mass;         // (k+1) x (k+1) mass
    Eigen::MatrixXd high_stiffness;    // gradient Gram of the degree k+1 basis
};

CellIntegrals cell_integrals(const PolytopalMesh& mesh, std::size_t cell, int k)
{
    const auto rule = cell_rule(mesh, cell, operator_quadrature_order(k));
    CellBasis high(mesh, cell, k + 1);
    Eigen::MatrixXd mass = mass_matrix(high, rule);
    Eigen::MatrixXd stiff = stiffness_gram(high, rule);
    return {LocalDofLayout(mesh, cell, k), std::move(high), std::move(mass), std::move(stiff)};
}

Eigen::MatrixXd reconstruction_from(const PolytopalMesh& mesh, std::size_t cell, int k,
                                    const CellIntegrals& ci)
{
    const auto& layout = ci.layout;
    const std::size_t nr = ci.high.size();
    const std::size_t nc = layout.cell_dofs;
    const std::size_t n = layout.total;

    // Rows 1..nr-1: (grad p, grad w) = (grad v_K, grad w) + (v_F - v_K, grad w . n)_dK
    // for w ranging over the non-constant degree-(k+1) monomials.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nr - 1, n);
    rhs.leftCols(nc) = ci.high_stiffness.block(1, 0, nr - 1, nc);

    const auto& faces = mesh.cell(cell).faces;
    const int order = operator_quadrature_order(k);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const std::size_t f = faces[i];
        const Point& normal = mesh.normal(cell, f);
        const FaceBasis fb(mesh, f, k);
        const auto rule = face_rule(mesh, f, order);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point& x = rule.points[q];
            const Eigen::VectorXd dn = (ci.high.eval_grad(x) * normal).tail(nr - 1);
            const Eigen::VectorXd cell_phi = ci.high.eval(x).head(nc);
            const Eigen::VectorXd face_phi = fb.eval(x);
            rhs.leftCols(nc).noalias() -= rule.weights[q] * dn * cell_phi.transpose();
            rhs.middleCols(layout.face_offsets[i], layout.face_dofs[i]).noalias()
                += rule.weights[q] * dn * face_phi.transpose();
        }
    }

    const Eigen::MatrixXd lhs = ci.high_stiffness.bottomRightCorner(nr - 1, nr - 1);
    Eigen::MatrixXd rec(nr, n);
    rec.bottomRows(nr - 1) = solve_gram(lhs, rhs);

    // Constant fixed by (p - v_K, 1)_K = 0; the first row of the mass matrix
    // holds the basis means times |K|.
    const double measure = ci.high_mass(0, 0);
    const Eigen::RowVectorXd means = ci.high_mass.row(0);
    Eigen::RowVectorXd c0 = -means.tail(nr - 1) * rec.bottomRows(nr - 1);
    c0.head(nc) += means.head(nc);
    rec.row(0) = c0 / measure;
    return rec;
}

struct Stabilization {
    std::vector<Eigen::MatrixXd> operators;
    std::vector<Eigen::MatrixXd> face_mass;
};

Stabilization stabilization_from(const PolytopalMesh& mesh, std::size_t cell, int k,
                                 const CellIntegrals& ci, const Eigen::MatrixXd& rec)
{
    const auto& layout = ci.layout;
    const std::size_t nc = layout.cell_dofs;
    const std::size_t nr = ci.high.size();

    // v_K - Pi_K^k p, in the degree-k cell basis
    const Eigen::MatrixXd cell_projector
        = solve_gram(ci.high_mass.topLeftCorner(nc, nc), ci.high_mass.topRows(nc));
    Eigen::MatrixXd cell_residual = -cell_projector * rec;
    cell_residual.leftCols(nc) += Eigen::MatrixXd::Identity(nc, nc);

    Stabilization out;
    const auto& faces = mesh.cell(cell).faces;
    const int order = operator_quadrature_order(k);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const std::size_t f = faces[i];
        const FaceBasis fb(mesh, f, k);
        const auto rule = face_rule(mesh, f, order);
        const std::size_t nf = fb.size();
        Eigen::MatrixXd mf = Eigen::MatrixXd::Zero(nf, nf);
        Eigen::MatrixXd trace_high = Eigen::MatrixXd::Zero(nf, nr);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd face_phi = fb.eval(rule.points[q]);
            mf.noalias() += rule.weights[q] * face_phi * face_phi.transpose();
            trace_high.noalias()
                += rule.weights[q] * face_phi * ci.high.eval(rule.points[q]).transpose();
        }
        // Pi_F(trace) of degree k+1 and degree k cell polynomials
        const Eigen::MatrixXd proj_high = solve_gram(mf, trace_high);
        const Eigen::MatrixXd proj_low = proj_high.leftCols(nc);

        // S_F = Pi_F(v_F - p) - (v_K - Pi_K p)|_F
        Eigen::MatrixXd s = -proj_high * rec - proj_low * cell_residual;
        s.middleCols(layout.face_offsets[i], nf) += Eigen::MatrixXd::Identity(nf, nf);
        out.operators.push_back(std::move(s));
        out.face_mass.push_back(std::move(mf));
    }
    return out;
}

void require_positive_eta(double eta)
{
    if (!(eta > 0.0))
        throw ConfigError("stabilization parameter eta must be positive, got "
                          + std::to_string(eta));
}

} // namespace

Eigen::MatrixXd reconstruction_operator(const PolytopalMesh& mesh, std::size_t cell, int k)
{
    return reconstruction_from(mesh, cell, k, cell_integrals(mesh, cell, k));
}

std::vector<Eigen::MatrixXd> stabilization_operator(const PolytopalMesh& mesh, std::size_t cell,
                                                    int k, const Eigen::MatrixXd& reconstruction)
{
    return stabilization_from(mesh, cell, k, cell_integrals(mesh, cell, k), reconstruction)
        .operators;
}

LocalOperators build_local_operators(const PolytopalMesh& mesh, std::size_t cell, int k,
                                     double eta)
{
    require_positive_eta(eta);
    if (k < 0)
        throw ConfigError("polynomial degree must be nonnegative");
    const CellIntegrals ci = cell_integrals(mesh, cell, k);

    LocalOperators ops;
    ops.layout = ci.layout;
    ops.reconstruction = reconstruction_from(mesh, cell, k, ci);
    auto stab = stabilization_from(mesh, cell, k, ci, ops.reconstruction);
    ops.stabilization = std::move(stab.operators);
    ops.face_mass = std::move(stab.face_mass);

    const auto& rec = ops.reconstruction;
    ops.stiffness = rec.transpose() * ci.high_stiffness * rec;
    const auto& faces = mesh.cell(cell).faces;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const double tau = eta / mesh.stabilization_length(cell, faces[i]);
        ops.tau.push_back(tau);
        const auto& s = ops.stabilization[i];
        ops.stiffness.noalias() += tau * s.transpose() * ops.face_mass[i] * s;
    }
    ops.stiffness = 0.5 * (ops.stiffness + ops.stiffness.transpose()).eval();

    const std::size_t nc = ci.layout.cell_dofs;
    ops.mass = ci.high_mass.topLeftCorner(nc, nc);
    return ops;
}

Eigen::MatrixXd local_stiffness(const PolytopalMesh& mesh, std::size_t cell, int k, double eta)
{
    return build_local_operators(mesh, cell, k, eta).stiffness;
}

Eigen::MatrixXd local_mass(const PolytopalMesh& mesh, std::size_t cell, int k)
{
    const std::size_t nc = polynomial_dimension(k, mesh.dim());
    return cell_integrals(mesh, cell, k).high_mass.topLeftCorner(nc, nc);
}

Eigen::VectorXd gather_local(const PolytopalMesh& mesh, std::size_t cell, int k,
                             const HhoVector& v)
{
    const LocalDofLayout layout(mesh, cell, k);
    const std::size_t per_face = mesh.dim() == 1 ? 1 : polynomial_dimension(k, 1);
    Eigen::VectorXd local(layout.total);
    local.head(layout.cell_dofs) = v.cell.segment(cell * layout.cell_dofs, layout.cell_dofs);
    const auto& faces = mesh.cell(cell).faces;
    for (std::size_t i = 0; i < faces.size(); ++i)
        local.segment(layout.face_offsets[i], per_face) = v.face.segment(faces[i] * per_face, per_face);
    return local;
}

double hho_seminorm(const PolytopalMesh& mesh, int k, const HhoVector& v, double eta)
{
    require_positive_eta(eta);
    const int order = operator_quadrature_order(k);
    double total = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const Eigen::VectorXd local = gather_local(mesh, c, k, v);
        const LocalDofLayout layout(mesh, c, k);
        const CellBasis cb(mesh, c, k);
        const Eigen::VectorXd vk = local.head(layout.cell_dofs);

        const auto rule = cell_rule(mesh, c, order);
        for (std::size_t q = 0; q < rule.size(); ++q)
            total += rule.weights[q] * (cb.eval_grad(rule.points[q]).transpose() * vk).squaredNorm();

        const auto& faces = mesh.cell(c).faces;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const FaceBasis fb(mesh, faces[i], k);
            const Eigen::VectorXd vf = local.segment(layout.face_offsets[i], layout.face_dofs[i]);
            const double tau = eta / mesh.stabilization_length(c, faces[i]);
            const auto frule = face_rule(mesh, faces[i], order);
            for (std::size_t q = 0; q < frule.size(); ++q) {
                const double jump = cb.eval(frule.points[q]).dot(vk) - fb.eval(frule.points[q]).dot(vf);
                total += tau * frule.weights[q] * jump * jump;
            }
        }
    }
    return std::sqrt(total);
}

} // namespace hho
