#include "hho/analysis.hpp"
#include "hho/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hho {

namespace {

constexpr double series_limit = 8.0;

/// Ascending series; in long double the largest term stays below 1e3 for
/// |x| <= 8, so cancellation costs at most three digits.
double bessel_series(int n, double x)
{
    const long double half = 0.5L * x;
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= half / static_cast<long double>(i);
    long double sum = term;
    const long double q = -half * half;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<long double>(m) * static_cast<long double>(m + n));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum))
            break;
    }
    return static_cast<double>(sum);
}

/// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt. The integrand is smooth and
/// periodic, so the trapezoidal rule converges geometrically.
double bessel_integral(int n, double x)
{
    const int points = 64 + static_cast<int>(2.0 * std::abs(x)) + 2 * n;
    double sum = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / points;
        const double w = (i == 0 || i == points) ? 0.5 : 1.0;
        sum += w * std::cos(n * t - x * std::sin(t));
    }
    return sum / points;
}

} // namespace

double bessel_j(int n, double x)
{
    if (n < 0)
        throw ConfigError("bessel_j: order must be nonnegative");
    return std::abs(x) <= series_limit ? bessel_series(n, x) : bessel_integral(n, x);
}

double bessel_zero(int n, int m)
{
    if (n < 0 || m < 1)
        throw ConfigError("bessel_zero: need n >= 0 and m >= 1");
    // McMahon expansion
    const double beta = (m + 0.5 * n - 0.25) * std::numbers::pi;
    const double mu = 4.0 * n * n;
    const double e = 8.0 * beta;
    double x = beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);

    for (int it = 0; it < 100; ++it) {
        const double jn = bessel_j(n, x);
        // J_n' = (J_{n-1} - J_{n+1}) / 2, with J_{-1} = -J_1
        const double jm = n == 0 ? -bessel_j(1, x) : bessel_j(n - 1, x);
        const double dj = 0.5 * (jm - bessel_j(n + 1, x));
        const double dx = jn / dj;
        x -= dx;
        if (std::abs(dx) < 1e-15 * x)
            return x;
    }
    throw NumericalError("bessel_zero: Newton iteration did not converge for n="
                         + std::to_string(n) + ", m=" + std::to_string(m));
}

} // namespace hho
