#pragma once

#include "hho/mesh.hpp"
#include "hho/quadrature.hpp"

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace hho {

using Gradients = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using ScalarFunction = std::function<double(const Point&)>;

/// Number of monomials of total degree <= k in d variables.
std::size_t polynomial_dimension(int k, int d);

/// Scaled monomials ((x - center) / scale)^alpha, |alpha| <= degree, ordered by
/// increasing total degree. The degree-k basis is therefore a prefix of the
/// degree-(k+1) basis built on the same cell.
class CellBasis {
public:
    CellBasis(int dim, int degree, const Point& center, double scale);
    CellBasis(const PolytopalMesh& mesh, std::size_t cell, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    std::size_t size() const { return exponents_.size(); }
    const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }
    const Point& center() const { return center_; }
    double scale() const { return scale_; }

    Eigen::VectorXd eval(const Point& x) const;
    /// Row i holds the gradient of basis function i.
    Gradients eval_grad(const Point& x) const;
    /// Rows are points, columns basis functions.
    Eigen::MatrixXd eval(const std::vector<Point>& points) const;

private:
    int dim_;
    int degree_;
    Point center_;
    double scale_;
    std::vector<std::array<int, 2>> exponents_;
};

/// Monomials of the midpoint-centered arc length t / h_F on an edge, or the
/// single constant function on a point face.
class FaceBasis {
public:
    FaceBasis(const PolytopalMesh& mesh, std::size_t face, int degree);

    int degree() const { return degree_; }
    std::size_t size() const { return size_; }
    Eigen::VectorXd eval(const Point& x) const;
    Eigen::MatrixXd eval(const std::vector<Point>& points) const;

private:
    int degree_;
    std::size_t size_;
    Point origin_;
    Point tangent_;
    double scale_;
};

/// Coefficients of a polynomial in a cell or face basis.
struct PolyCoeffs {
    enum class Support { Cell, Face };
    Support support;
    int degree;
    Eigen::VectorXd values;
};

template <class Basis>
Eigen::MatrixXd mass_matrix(const Basis& basis, const QuadratureRule& rule)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd phi = basis.eval(rule.points[q]);
        m.noalias() += rule.weights[q] * phi * phi.transpose();
    }
    return m;
}

/// Gram matrix of gradients, (grad phi_i, grad phi_j).
Eigen::MatrixXd stiffness_gram(const CellBasis& basis, const QuadratureRule& rule);

/// Moments (f, phi_i) over the rule.
template <class Basis>
Eigen::VectorXd moments(const Basis& basis, const ScalarFunction& f, const QuadratureRule& rule)
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(basis.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
        b += rule.weights[q] * f(rule.points[q]) * basis.eval(rule.points[q]);
    return b;
}

/// Solves M x = b with M a symmetric positive definite Gram matrix; throws
/// NumericalError when M is numerically singular.
Eigen::MatrixXd solve_gram(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& rhs);

/// L2-orthogonal projection onto the cell polynomial space.
PolyCoeffs l2_project_cell(const CellBasis& basis, const ScalarFunction& f,
                           const QuadratureRule& rule);
/// L2-orthogonal projection onto the face polynomial space.
PolyCoeffs l2_project_face(const FaceBasis& basis, const ScalarFunction& f,
                           const QuadratureRule& rule);

} // namespace hho
