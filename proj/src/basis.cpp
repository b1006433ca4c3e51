#include "hho/basis.hpp"
#include "hho/error.hpp"

#include <cmath>

namespace hho {

std::size_t polynomial_dimension(int k, int d)
{
    if (k < 0)
        return 0;
    return d == 1 ? static_cast<std::size_t>(k + 1)
                  : static_cast<std::size_t>((k + 1) * (k + 2) / 2);
}

CellBasis::CellBasis(int dim, int degree, const Point& center, double scale)
    : dim_(dim), degree_(degree), center_(center), scale_(scale)
{
    for (int total = 0; total <= degree; ++total) {
        if (dim == 1) {
            exponents_.push_back({total, 0});
        } else {
            for (int j = 0; j <= total; ++j)
                exponents_.push_back({total - j, j});
        }
    }
}

CellBasis::CellBasis(const PolytopalMesh& mesh, std::size_t cell, int degree)
    : CellBasis(mesh.dim(), degree, mesh.cell(cell).centroid, mesh.cell(cell).diameter)
{
}

namespace {

/// powers[j] = s^j for j = 0..degree
std::array<double, 16> powers(double s, int degree)
{
    std::array<double, 16> p{};
    p[0] = 1.0;
    for (int j = 1; j <= degree; ++j)
        p[j] = p[j - 1] * s;
    return p;
}

} // namespace

Eigen::VectorXd CellBasis::eval(const Point& x) const
{
    const Point s = (x - center_) / scale_;
    const auto px = powers(s.x(), degree_);
    const auto py = powers(s.y(), degree_);
    Eigen::VectorXd v(size());
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        v[i] = px[exponents_[i][0]] * py[exponents_[i][1]];
    return v;
}

Gradients CellBasis::eval_grad(const Point& x) const
{
    const Point s = (x - center_) / scale_;
    const auto px = powers(s.x(), degree_);
    const auto py = powers(s.y(), degree_);
    Gradients g(size(), 2);
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const int a = exponents_[i][0], b = exponents_[i][1];
        g(i, 0) = a == 0 ? 0.0 : a * px[a - 1] * py[b] / scale_;
        g(i, 1) = b == 0 ? 0.0 : b * px[a] * py[b - 1] / scale_;
    }
    return g;
}

Eigen::MatrixXd CellBasis::eval(const std::vector<Point>& points) const
{
    Eigen::MatrixXd m(points.size(), size());
    for (std::size_t q = 0; q < points.size(); ++q)
        m.row(q) = eval(points[q]).transpose();
    return m;
}

FaceBasis::FaceBasis(const PolytopalMesh& mesh, std::size_t face, int degree)
    : degree_(degree)
{
    const Face& f = mesh.face(face);
    origin_ = f.barycenter;
    if (mesh.dim() == 1) {
        size_ = 1;
        tangent_ = Point::Zero();
        scale_ = 1.0;
    } else {
        size_ = static_cast<std::size_t>(degree + 1);
        tangent_ = (mesh.vertices()[f.vertices[1]] - mesh.vertices()[f.vertices[0]]).normalized();
        scale_ = f.diameter;
    }
}

Eigen::VectorXd FaceBasis::eval(const Point& x) const
{
    Eigen::VectorXd v(size_);
    const double t = (x - origin_).dot(tangent_) / scale_;
    double p = 1.0;
    for (std::size_t j = 0; j < size_; ++j) {
        v[j] = p;
        p *= t;
    }
    return v;
}

Eigen::MatrixXd FaceBasis::eval(const std::vector<Point>& points) const
{
    Eigen::MatrixXd m(points.size(), size());
    for (std::size_t q = 0; q < points.size(); ++q)
        m.row(q) = eval(points[q]).transpose();
    return m;
}

Eigen::MatrixXd stiffness_gram(const CellBasis& basis, const QuadratureRule& rule)
{
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Gradients dphi = basis.eval_grad(rule.points[q]);
        g.noalias() += rule.weights[q] * dphi * dphi.transpose();
    }
    return g;
}

Eigen::MatrixXd solve_gram(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& rhs)
{
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const auto d = ldlt.vectorD();
    const double scale = gram.diagonal().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-13 * scale)
        throw NumericalError("singular Gram matrix (degenerate cell or face)");
    return ldlt.solve(rhs);
}

PolyCoeffs l2_project_cell(const CellBasis& basis, const ScalarFunction& f,
                           const QuadratureRule& rule)
{
    return {PolyCoeffs::Support::Cell, basis.degree(),
            solve_gram(mass_matrix(basis, rule), moments(basis, f, rule))};
}

PolyCoeffs l2_project_face(const FaceBasis& basis, const ScalarFunction& f,
                           const QuadratureRule& rule)
{
    return {PolyCoeffs::Support::Face, basis.degree(),
            solve_gram(mass_matrix(basis, rule), moments(basis, f, rule))};
}

} // namespace hho
