#include "filband/model.hpp"

#include <cmath>

namespace filband {

namespace {

constexpr double kSeriesSwitch = 0.35; // on |x| = |q|/(2c)

// atanh(x)/x via its Taylor series; used for |x| < kSeriesSwitch where the
// log form of P0 loses digits. Terms decay like x^2 <= 0.1225, so the loop
// reaches double precision in under 20 terms.
double atanh_over_x_series(double x) {
    const double x2 = x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= x2;
        const double add = term / (2 * k + 1);
        sum += add;
        if (add < 1e-17 * sum) break;
    }
    return sum;
}

// G(x) = (atanh(x)/x - 1)/x^2 = 1/3 + x^2/5 + x^4/7 + ...  The P1 integral
// is int s^2/(c-qs) ds = G(x)/(4c); evaluating G instead of the printed
// closed form removes the c/q^2 cancellation entirely.
double g_series(double x) {
    const double x2 = x * x;
    double term = 1.0, sum = 1.0 / 3.0;
    for (int k = 1; k < 40; ++k) {
        term *= x2;
        const double add = term / (2 * k + 3);
        sum += add;
        if (add < 1e-17 * sum) break;
    }
    return sum;
}

} // namespace

PressurePair pressure_kernels(double c, double dphi, double beta) {
    const double q = std::sqrt(12.0) * beta * dphi;
    if (!(c > 0.0) || std::abs(q) >= 2.0 * c)
        throw std::domain_error("pressure_kernels: filament ordering lost (c <= 0 or |q| >= 2c)");

    const double x = q / (2.0 * c);
    double p0, p1;
    if (std::abs(x) < kSeriesSwitch) {
        p0 = atanh_over_x_series(x) / c;
        p1 = 3.0 * dphi * g_series(x) / (c * c);
    } else {
        const double ell = std::log((c + 0.5 * q) / (c - 0.5 * q));
        p0 = ell / q;
        // P1 = (12 dphi / c) * (c^2/q^3 ell - c/q^2)
        p1 = (12.0 * dphi / c) * (c * c / (q * q * q) * ell - c / (q * q));
    }
    return {p0, p1};
}

} // namespace filband
