#ifndef FILBAND_MODEL_HPP
#define FILBAND_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "filband/geometry.hpp"

namespace filband {

// The whole parameter space of the dimensionless model: beta measures the
// aspect ratio between filament length and band width, gamma the relative
// strength of tension against the boundary forces.
struct ModelParams {
    double beta;
    double gamma;

    ModelParams(double beta_, double gamma_) : beta(beta_), gamma(gamma_) {
        if (!(beta > 0.0))
            throw std::domain_error("ModelParams: beta must be positive");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::domain_error("ModelParams: gamma must lie in (0,1)");
    }
};

// Uniform grid on [0,1]: n cells of width 1/n, edges at i/n, unknowns held
// at cell centers.
struct Grid {
    int n;
    double dalpha;

    explicit Grid(int n_) : n(n_), dalpha(1.0 / n_) {
        if (n < 4) throw std::domain_error("Grid: need at least 4 cells");
    }

    double edge(int i) const { return static_cast<double>(i) / n; }
    double center(int i) const { return (i + 0.5) / n; }
};

// Dynamical state: filament centers z and angles phi at the n cell centers.
// Angles are stored unwrapped; cumulative rotation is meaningful.
struct BandState {
    std::vector<Vec2> z;
    std::vector<double> phi;

    BandState() = default;
    BandState(std::vector<Vec2> z_, std::vector<double> phi_)
        : z(std::move(z_)), phi(std::move(phi_)) {
        if (z.size() != phi.size())
            throw std::invalid_argument("BandState: z and phi length mismatch");
        if (z.size() < 4)
            throw std::invalid_argument("BandState: need at least 4 cells");
    }

    int n() const { return static_cast<int>(phi.size()); }
};

// Transversal pressure P0 and (the first moment) P1 at one cell edge.
struct PressurePair {
    double p0;
    double p1;
};

// Pressure kernels, the nonlinear core of the model:
//
//   P0 = int_{-1/2}^{1/2} ds / (c - q s),
//   P1 = (12 dphi / c) int_{-1/2}^{1/2} s^2 ds / (c - q s),
//
// with c = u^perp . omega(phi) > 0 and q = sqrt(12) beta dphi. Closed forms
// in terms of log((c+q/2)/(c-q/2)) suffer catastrophic cancellation for
// small |q|/c, so both kernels switch to a power series in x = q/(2c); see
// pressure.cpp. Throws std::domain_error when c <= 0 or |q| >= 2c, i.e.
// when the filament ordering (finite density) is lost.
PressurePair pressure_kernels(double c, double dphi, double beta);

// Trivial steady state: constant angle phi0, filaments covering a rectangle,
// z(alpha) = z0 - alpha omega(phi0)^perp with z0 chosen so that z has zero
// mean. Satisfies u = -omega(phi0)^perp, P0 = 1, P1 = 0.
BandState trivial_state(double phi0, int n);

// First bifurcation point of the trivial family at fixed gamma.
inline double beta0(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("beta0: gamma must lie in (0,1)");
    const double pi = 3.14159265358979323846;
    return std::sqrt((1.0 - gamma) / gamma) / (2.0 * pi);
}

// Coefficients of the pitchfork normal form  dA/dt = A (kappa1 sigma - kappa2 A^2),
// together with the distance measure epsilon = sqrt(|beta0^2 - beta^2|) and
// sigma = sign(beta0^2 - beta^2). kappa1 > 0 on (0,1); kappa2 changes sign
// at gamma = 1/2 (subcritical below, supercritical above).
struct NormalFormCoeffs {
    double kappa1;
    double kappa2;
    int sigma;      // sign(beta0^2 - beta^2); 0 exactly at the bifurcation
    double epsilon; // sqrt(|beta0^2 - beta^2|)
};

NormalFormCoeffs normal_form_coeffs(const ModelParams& params);

// First-order prediction of the bifurcating steady state at distance epsilon
// from the bifurcation point, with the free rotation constant set to zero:
//
//   u   = (1,0) +/- eps A* (0, sin(2 pi a) - 2 pi gamma a),
//   phi = pi/2  +/- eps A* gamma (sin(2 pi a) - 2 pi a),
//
// where A* = sqrt(kappa1/kappa2) (supercritical, gamma > 1/2, beta < beta0)
// or A* = sqrt(-kappa1/kappa2) (subcritical unstable branch, gamma < 1/2,
// beta > beta0). z is reconstructed from u with zero mean. Throws
// std::domain_error when no such branch exists for the given (beta, gamma).
struct BranchPrediction {
    BandState state;
    double amplitude; // A = eps * A*
};

BranchPrediction bifurcating_branch_prediction(const ModelParams& params, int sign, int n);

// Amplitude of a state measured as the least-squares coefficient A in
// phi ~ const + A gamma (sin(2 pi a) - 2 pi a); the natural scalar to put
// against the normal-form prediction.
double fitted_mode_amplitude(const BandState& state, double gamma);

// Flat packing [z1x, z1y, ..., znx, zny, phi1, ..., phin] used by the
// integrator and the steady solver.
std::vector<double> pack(const BandState& state);
BandState unpack(const std::vector<double>& y);

} // namespace filband

#endif
