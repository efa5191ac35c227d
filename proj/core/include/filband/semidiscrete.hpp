#ifndef FILBAND_SEMIDISCRETE_HPP
#define FILBAND_SEMIDISCRETE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "filband/model.hpp"

namespace filband {

// Thrown when the transversal density blows up, i.e. the ordering condition
// u^perp . omega > sqrt(12) beta |dphi| / 2 fails at some edge. Silent
// clamping would mask the blow-up, so this is a hard error.
class PositivityError : public std::runtime_error {
public:
    PositivityError(int edge_, double c_, double qhalf_)
        : std::runtime_error("density positivity lost at edge " + std::to_string(edge_)),
          edge(edge_), c(c_), qhalf(qhalf_) {}

    int edge;      // offending edge index
    double c;      // u^perp . omega there
    double qhalf;  // sqrt(12) beta |dphi| / 2 there
};

// Reconstructed quantities at the n+1 cell edges. Interior edges carry the
// averaged angle, centered angle gradient and centered position gradient;
// boundary edges carry only the quadratically extrapolated angle.
struct EdgeValues {
    std::vector<double> phi;   // size n+1; interior averaged, boundary extrapolated
    std::vector<double> dphi;  // size n+1; centered at interior edges, 0 stored at 0 and n
    std::vector<Vec2> dz;      // size n+1; centered at interior edges, unused at 0 and n
};

// Semi-discrete right hand side, one entry per cell.
struct RhsEval {
    std::vector<Vec2> dz_dt;
    std::vector<double> dphi_dt;
};

// Averaging / centered differences at interior edges, quadratic extrapolation
// of phi at the boundary edges (phi_0 = 9/8 phi_{1/2} - 1/8 phi_{3/2}).
// Throws PositivityError when the density positivity check fails at an edge.
EdgeValues reconstruct_edges(const BandState& state, const ModelParams& params);

// Finite-volume right hand side of the filament band system:
//   dz/dt   at cell i+1/2: (f_{i+1} - f_i)/dalpha,
//   dphi/dt at cell i+1/2: (g_{i+1} - g_i)/dalpha + (s_i + s_{i+1})/2,
// with interior fluxes f = P0 omega^perp + gamma dz/|dz|, g = P1, source
// s = P0 (dz . omega)/beta^2, and boundary values f = (1-gamma) omega^perp,
// g = 0, s = 0 (the flux boundary condition makes dz . omega vanish there).
RhsEval rhs(const BandState& state, const ModelParams& params);

// rhs flattened into the pack() layout; the form the integrator and the
// Jacobians consume.
void rhs_flat(const std::vector<double>& y, const ModelParams& params,
              std::vector<double>& dydt);

} // namespace filband

#endif
