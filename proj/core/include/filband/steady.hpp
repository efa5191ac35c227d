#ifndef FILBAND_STEADY_HPP
#define FILBAND_STEADY_HPP

#include <complex>
#include <string>
#include <vector>

#include "filband/model.hpp"

namespace filband {

// A constant-shape, constant-velocity, rotation-free solution: a steady
// state in the co-moving frame.
struct TravelingWave {
    BandState state;
    Vec2 velocity;
    double beta = 0.0;
    bool stable = false;
    double residual_norm = 0.0; // inf-norm of the square (3n+2) residual
};

struct Branch {
    std::vector<TravelingWave> points;
    std::vector<double> fold_locations;
    std::string termination; // why the continuation stopped
};

// Residual of the traveling-wave system, size 3n+2:
//   dz/dt - V per cell (2n), dphi/dt per cell (n), mean(z) = 0 (2).
// Unknowns are (z, phi, V), so the system is square as stated; the rotation
// symmetry makes its Jacobian exactly rank-deficient by one at any solution,
// which newton_solve handles by pinning mean(phi) and solving in the
// least-squares sense.
std::vector<double> steady_residual(const BandState& state, Vec2 velocity,
                                    const ModelParams& params);

struct NewtonOptions {
    double tol = 1e-10;      // on the inf-norm of the square residual
    int max_iterations = 40;
    double symmetry_tol = 1e-6; // band for the three symmetry eigenvalues
    bool tag_stability = true;
};

// Damped Newton with a finite-difference Jacobian on the mean(phi)-augmented
// system (QR least squares). Throws on non-convergence.
TravelingWave newton_solve(const BandState& guess, Vec2 velocity_guess,
                           const ModelParams& params, const NewtonOptions& opts = {});

struct StabilityReport {
    bool stable;
    std::vector<std::complex<double>> eigenvalues;       // descending real part
    std::vector<std::complex<double>> symmetry_excluded; // the three removed
};

// Spectrum of the Jacobian of the full semi-discrete RHS at the wave, with
// the translation (x2) and rotation (x1) zero modes excluded; stable iff
// everything else has negative real part. Throws when a non-symmetry
// eigenvalue lies inside the symmetry tolerance band.
StabilityReport stability(const TravelingWave& wave, const ModelParams& params,
                          double symmetry_tol = 1e-6);

struct ContinuationOptions {
    double initial_dbeta = -1e-3; // signed; sign sets the march direction
    double max_dbeta = 5e-3;
    double min_dbeta = 1e-7;      // below this, switch to pseudo-arclength
    double grow = 1.3;
    int max_points = 400;
    NewtonOptions newton;
};

// Natural-parameter continuation in beta with adaptive steps, switching to
// pseudo-arclength when the fold makes natural steps collapse. Stops when
// the branch leaves [beta_min, beta_max], the step underflows, or the
// density positivity fails; the reason is recorded.
Branch continue_branch(const TravelingWave& start, const ModelParams& params,
                       double beta_min, double beta_max,
                       const ContinuationOptions& opts = {});

// max |phi - mean(phi)|, the amplitude measure used in branch exports.
double phi_amplitude(const BandState& state);

} // namespace filband

#endif
