#include "filband/model.hpp"

#include <cmath>
#include <numbers>

namespace filband {

namespace {
constexpr double kPi = std::numbers::pi;
}

BandState trivial_state(double phi0, int n) {
    Grid grid(n);
    const Vec2 wp = perp(omega(phi0));
    std::vector<Vec2> z(n);
    std::vector<double> phi(n, phi0);
    for (int i = 0; i < n; ++i) {
        // z = (1/2 - alpha) omega^perp: zero mean because the centers are
        // symmetric about alpha = 1/2.
        z[i] = (0.5 - grid.center(i)) * wp;
    }
    return BandState(std::move(z), std::move(phi));
}

NormalFormCoeffs normal_form_coeffs(const ModelParams& params) {
    const double g = params.gamma;
    const double pi2 = kPi * kPi;
    const double denom = 1.0 + 5.0 * g - 3.0 * g * g;
    NormalFormCoeffs c;
    c.kappa1 = 16.0 * pi2 * pi2 * g * g / denom;
    c.kappa2 = -pi2 * g * (9.0 + 54.0 * g + (42.0 + 8.0 * pi2) * g * g)
               * (1.0 - g) * (1.0 - 2.0 * g) / (6.0 * denom);
    const double b0 = beta0(g);
    const double gap = b0 * b0 - params.beta * params.beta;
    c.sigma = (gap > 0.0) ? 1 : (gap < 0.0 ? -1 : 0);
    c.epsilon = std::sqrt(std::abs(gap));
    return c;
}

BranchPrediction bifurcating_branch_prediction(const ModelParams& params, int sign, int n) {
    Grid grid(n);
    const NormalFormCoeffs nf = normal_form_coeffs(params);
    const double g = params.gamma;

    // The branch exists where sigma * kappa1/kappa2 > 0: beta < beta0 in the
    // supercritical regime (gamma > 1/2), beta > beta0 in the subcritical one.
    const double ratio = nf.kappa2 != 0.0 ? nf.sigma * nf.kappa1 / nf.kappa2 : -1.0;
    if (!(ratio > 0.0))
        throw std::domain_error(
            "bifurcating_branch_prediction: no nontrivial branch at this (beta, gamma)");

    const double astar = std::sqrt(ratio);
    const double amp = nf.epsilon * astar * (sign >= 0 ? 1.0 : -1.0);

    // u = (1,0) + amp (0, m(a)) with m = sin(2 pi a) - 2 pi gamma a; integrate
    // u once for z, then shift to zero mean. The antiderivative of m is
    // (1 - cos(2 pi a))/(2 pi) - pi gamma a^2.
    std::vector<Vec2> z(n);
    std::vector<double> phi(n);
    double mean_x = 0.0, mean_y = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = grid.center(i);
        const double anti = (1.0 - std::cos(2.0 * kPi * a)) / (2.0 * kPi) - kPi * g * a * a;
        z[i] = {a, amp * anti};
        phi[i] = 0.5 * kPi + amp * g * (std::sin(2.0 * kPi * a) - 2.0 * kPi * a);
        mean_x += z[i].x;
        mean_y += z[i].y;
    }
    mean_x /= n;
    mean_y /= n;
    for (auto& p : z) p -= Vec2{mean_x, mean_y};

    return {BandState(std::move(z), std::move(phi)), std::abs(amp)};
}

double fitted_mode_amplitude(const BandState& state, double gamma) {
    const int n = state.n();
    Grid grid(n);
    double phimean = 0.0;
    for (double p : state.phi) phimean += p;
    phimean /= n;

    // Project phi - mean onto the zero-mean mode gamma (sin(2 pi a) - 2 pi a + pi).
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = grid.center(i);
        const double m = gamma * (std::sin(2.0 * kPi * a) - 2.0 * kPi * a + kPi);
        num += (state.phi[i] - phimean) * m;
        den += m * m;
    }
    return num / den;
}

std::vector<double> pack(const BandState& state) {
    const int n = state.n();
    std::vector<double> y(3 * n);
    for (int i = 0; i < n; ++i) {
        y[2 * i] = state.z[i].x;
        y[2 * i + 1] = state.z[i].y;
        y[2 * n + i] = state.phi[i];
    }
    return y;
}

BandState unpack(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size()) / 3;
    std::vector<Vec2> z(n);
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) {
        z[i] = {y[2 * i], y[2 * i + 1]};
        phi[i] = y[2 * n + i];
    }
    return BandState(std::move(z), std::move(phi));
}

} // namespace filband
