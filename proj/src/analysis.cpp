#include "hho/analysis.hpp"
#include "hho/error.hpp"
#include "hho/parallel.hpp"
#include "hho/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace hho {

namespace {

constexpr double pi = std::numbers::pi;

using Pair = std::pair<ScalarFunction, GradientFunction>;

Pair interval_mode(int j)
{
    const double w = j * pi;
    return {[w](const Point& x) { return std::sqrt(2.0) * std::sin(w * x.x()); },
            [w](const Point& x) { return Point(std::sqrt(2.0) * w * std::cos(w * x.x()), 0.0); }};
}

Pair square_mode(int j, int k, double scale = 2.0)
{
    const double a = j * pi;
    const double b = k * pi;
    return {[=](const Point& x) { return scale * std::sin(a * x.x()) * std::sin(b * x.y()); },
            [=](const Point& x) {
                return Point(scale * a * std::cos(a * x.x()) * std::sin(b * x.y()),
                             scale * b * std::sin(a * x.x()) * std::cos(b * x.y()));
            }};
}

double bessel_derivative(int n, double x)
{
    const double jm = n == 0 ? -bessel_j(1, x) : bessel_j(n - 1, x);
    return 0.5 * (jm - bessel_j(n + 1, x));
}

/// J_n(s r) cos(n theta) or J_n(s r) sin(n theta) on the unit disk, L2-normalized.
Pair disk_mode(int n, double s, bool use_sine)
{
    const double norm2 = n == 0 ? pi * std::pow(bessel_j(1, s), 2)
                                : 0.5 * pi * std::pow(bessel_j(n + 1, s), 2);
    const double c = 1.0 / std::sqrt(norm2);
    auto angular = [=](double theta) { return use_sine ? std::sin(n * theta) : std::cos(n * theta); };
    auto angular_d = [=](double theta) {
        return use_sine ? n * std::cos(n * theta) : -n * std::sin(n * theta);
    };
    ScalarFunction value = [=](const Point& x) {
        return c * bessel_j(n, s * x.norm()) * angular(std::atan2(x.y(), x.x()));
    };
    GradientFunction gradient = [=](const Point& x) -> Point {
        const double r = x.norm();
        if (r < 1e-14) {
            // only n = 1 has a nonzero gradient at the origin
            if (n != 1)
                return Point::Zero();
            return use_sine ? Point(0.0, c * 0.5 * s) : Point(c * 0.5 * s, 0.0);
        }
        const double theta = std::atan2(x.y(), x.x());
        const double du_dr = c * s * bessel_derivative(n, s * r) * angular(theta);
        const double du_dt_r = c * bessel_j(n, s * r) * angular_d(theta) / r;
        const Point er(std::cos(theta), std::sin(theta));
        const Point et(-std::sin(theta), std::cos(theta));
        return du_dr * er + du_dt_r * et;
    };
    return {value, gradient};
}

struct Candidate {
    double key;   ///< sort key (eigenvalue, or an exact integer proxy)
    double lambda;
    Pair function;
};

/// Sorts candidates, groups equal keys into eigenspaces and keeps `count`.
std::vector<ExactEigenpair> collect(std::vector<Candidate> all, std::size_t count,
                                    double key_tolerance)
{
    std::stable_sort(all.begin(), all.end(),
                     [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
    std::vector<ExactEigenpair> out;
    std::size_t i = 0;
    while (out.size() < count && i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].key - all[i].key <= key_tolerance * all[i].key)
            ++j;
        std::vector<Pair> space;
        for (std::size_t m = i; m < j; ++m)
            space.push_back(all[m].function);
        for (std::size_t m = i; m < j && out.size() < count; ++m) {
            ExactEigenpair e;
            e.eigenvalue = all[m].lambda;
            e.value = all[m].function.first;
            e.gradient = all[m].function.second;
            e.multiplicity = static_cast<int>(j - i);
            e.eigenspace = space;
            out.push_back(std::move(e));
        }
        i = j;
    }
    return out;
}

std::vector<ExactEigenpair> interval_spectrum(std::size_t count)
{
    std::vector<ExactEigenpair> out;
    for (std::size_t j = 1; j <= count; ++j) {
        ExactEigenpair e;
        e.eigenvalue = std::pow(j * pi, 2);
        std::tie(e.value, e.gradient) = interval_mode(static_cast<int>(j));
        e.eigenspace = {interval_mode(static_cast<int>(j))};
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ExactEigenpair> square_spectrum(std::size_t count)
{
    // every (j, k) with j^2 + k^2 <= (count + 1)^2 + 1 covers the first count
    // values and their complete eigenspaces
    const int limit = static_cast<int>(count) + 2;
    std::vector<Candidate> all;
    for (int j = 1; j <= limit; ++j)
        for (int k = 1; k <= limit; ++k) {
            const int key = j * j + k * k;
            if (key > (limit - 1) * (limit - 1) + 1)
                continue;
            all.push_back({static_cast<double>(key), pi * pi * key, square_mode(j, k)});
        }
    return collect(std::move(all), count, 0.0);
}

std::vector<ExactEigenpair> lshape_spectrum(std::size_t count)
{
    std::vector<ExactEigenpair> out(count);
    if (count >= 1)
        out[0].eigenvalue = lshape_first_eigenvalue;
    if (count >= 3) {
        // 2 sin(pi x) sin(pi y) / sqrt(3) restricted to the L-shape
        auto pair = square_mode(1, 1, 2.0 / std::sqrt(3.0));
        out[2].eigenvalue = 2.0 * pi * pi;
        std::tie(out[2].value, out[2].gradient) = pair;
        out[2].eigenspace = {pair};
    }
    return out;
}

std::vector<ExactEigenpair> disk_spectrum(std::size_t count)
{
    if (count == 0)
        return {};
    // s_{0,count} bounds the count-th zero; zeros grow in both n and m
    const double bound = bessel_zero(0, static_cast<int>(count)) * (1.0 + 1e-12);
    std::vector<Candidate> all;
    for (int n = 0; bessel_zero(n, 1) <= bound; ++n)
        for (int m = 1;; ++m) {
            const double s = bessel_zero(n, m);
            if (s > bound)
                break;
            all.push_back({s * s, s * s, disk_mode(n, s, false)});
            if (n > 0)
                all.push_back({s * s, s * s, disk_mode(n, s, true)});
        }
    return collect(std::move(all), count, 1e-12);
}

double cell_function_value(const CellBasis& basis, const Eigen::VectorXd& coeffs, const Point& x)
{
    return basis.eval(x).dot(coeffs);
}

} // namespace

Domain parse_domain(const std::string& name)
{
    if (name == "interval")
        return Domain::Interval;
    if (name == "square")
        return Domain::Square;
    if (name == "lshape")
        return Domain::LShape;
    if (name == "disk")
        return Domain::Disk;
    throw ConfigError("unsupported domain '" + name + "'");
}

std::string to_string(Domain domain)
{
    switch (domain) {
    case Domain::Interval: return "interval";
    case Domain::Square: return "square";
    case Domain::LShape: return "lshape";
    case Domain::Disk: return "disk";
    }
    return "unknown";
}

std::vector<ExactEigenpair> exact_spectrum(Domain domain, std::size_t count)
{
    switch (domain) {
    case Domain::Interval: return interval_spectrum(count);
    case Domain::Square: return square_spectrum(count);
    case Domain::LShape: return lshape_spectrum(count);
    case Domain::Disk: return disk_spectrum(count);
    }
    throw ConfigError("unsupported domain");
}

std::vector<ModeError> match_and_errors(const Spectrum& spectrum,
                                        const std::vector<ExactEigenpair>& exact)
{
    if (spectrum.size() < exact.size())
        throw ConfigError("only " + std::to_string(spectrum.size())
                          + " discrete eigenvalues for " + std::to_string(exact.size())
                          + " reference modes");
    std::vector<ModeError> out;
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        ModeError e{j + 1, spectrum.eigenvalues(static_cast<Eigen::Index>(j)), {}, {}};
        if (j < exact.size() && exact[j].eigenvalue) {
            e.lambda_exact = *exact[j].eigenvalue;
            e.relative_error = std::abs(e.lambda_h - *e.lambda_exact) / *e.lambda_exact;
        }
        out.push_back(e);
    }
    return out;
}

double h1_reconstruction_error(const PolytopalMesh& mesh, const GlobalBlocks& blocks,
                               const Eigen::VectorXd& cell_values,
                               const Eigen::VectorXd& face_values,
                               const GradientFunction& exact_gradient, int quad_order)
{
    const DofMap& dofs = blocks.dofs;
    const int k = blocks.degree;
    std::vector<double> local_error(mesh.num_cells(), 0.0);
    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        const LocalOperators& op = blocks.local[c];
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.layout.total));
        v.head(dofs.cell_block) = cell_values.segment(dofs.cell_offset[c], dofs.cell_block);
        for (std::size_t i = 0; i < mesh.cell(c).faces.size(); ++i) {
            const auto& offset = dofs.cell_face_offset[c][i];
            if (offset)
                v.segment(op.layout.face_offsets[i], dofs.face_block) =
                    face_values.segment(*offset, dofs.face_block);
        }
        const Eigen::VectorXd p = op.reconstruction * v;
        const CellBasis high(mesh, c, k + 1);
        const QuadratureRule rule = cell_rule(mesh, c, quad_order);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point diff = exact_gradient(rule.points[q])
                               - Point(high.eval_grad(rule.points[q]).transpose() * p);
            sum += rule.weights[q] * diff.squaredNorm();
        }
        local_error[c] = sum;
    });
    double total = 0.0;
    for (double e : local_error)
        total += e;
    return std::sqrt(total);
}

double h1_eigenfunction_error(const PolytopalMesh& mesh, const GlobalBlocks& blocks,
                              const Spectrum& spectrum, std::size_t mode,
                              const std::vector<ExactEigenpair>& exact, int quad_order)
{
    if (mode >= spectrum.size() || mode >= exact.size())
        throw ConfigError("mode " + std::to_string(mode + 1) + " is out of range");
    const ExactEigenpair& ref = exact[mode];
    if (!ref.has_function() || ref.eigenspace.empty())
        throw ConfigError("no reference eigenfunction for mode " + std::to_string(mode + 1));
    if (spectrum.face_vectors.cols() <= static_cast<Eigen::Index>(mode))
        throw ConfigError("spectrum carries no face unknowns for mode " + std::to_string(mode + 1));

    const auto m = static_cast<Eigen::Index>(mode);
    const Eigen::VectorXd cell_values = spectrum.cell_vectors.col(m);
    const DofMap& dofs = blocks.dofs;
    const int k = blocks.degree;

    // (u_h, u_i) for each member u_i of the exact eigenspace
    const std::size_t dim = ref.eigenspace.size();
    std::vector<Eigen::VectorXd> local(mesh.num_cells());
    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        const CellBasis basis(mesh, c, k);
        const Eigen::VectorXd coeffs = cell_values.segment(dofs.cell_offset[c], dofs.cell_block);
        const QuadratureRule rule = cell_rule(mesh, c, quad_order);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double uh = cell_function_value(basis, coeffs, rule.points[q]);
            for (std::size_t i = 0; i < dim; ++i)
                acc(static_cast<Eigen::Index>(i)) +=
                    rule.weights[q] * uh * ref.eigenspace[i].first(rule.points[q]);
        }
        local[c] = acc;
    });
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& acc : local)
        proj += acc;

    GradientFunction gradient;
    if (dim == 1) {
        const double sign = proj(0) < 0.0 ? -1.0 : 1.0;
        gradient = [&, sign](const Point& x) -> Point { return sign * ref.eigenspace[0].second(x); };
    } else {
        const double norm = proj.norm();
        if (norm == 0.0)
            throw NumericalError("discrete mode is orthogonal to the exact eigenspace");
        const Eigen::VectorXd w = proj / norm;
        gradient = [&, w](const Point& x) -> Point {
            Point g = Point::Zero();
            for (std::size_t i = 0; i < dim; ++i)
                g += w(static_cast<Eigen::Index>(i)) * ref.eigenspace[i].second(x);
            return g;
        };
    }
    return h1_reconstruction_error(mesh, blocks, cell_values, spectrum.face_vectors.col(m),
                                   gradient, quad_order);
}

std::vector<std::optional<double>> observed_orders(const std::vector<double>& errors)
{
    std::vector<std::optional<double>> orders(errors.size());
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] <= order_error_floor || errors[i - 1] <= order_error_floor)
            continue;
        orders[i] = std::log2(errors[i - 1] / errors[i]);
    }
    return orders;
}

} // namespace hho
