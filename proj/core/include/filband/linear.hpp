#ifndef FILBAND_LINEAR_HPP
#define FILBAND_LINEAR_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "filband/model.hpp"

namespace filband {

// Discrete linearization of the cross-diffusion system around the trivial
// steady state,
//   d/dt b   = D2 (gamma b - psi),
//   d/dt psi = D2 psi + (b - psi)/beta^2,
// with b - psi = d(psi)/da = 0 at a = 0, 1, acting on stacked cell values
// (b_1..b_n, psi_1..psi_n). Interior rows are the centered second
// difference; boundary-cell rows use one-sided cubic stencils that fold in
// the boundary conditions, keeping the truncation error O(dalpha^2) up to
// the wall. The constant vector (c, ..., c) spans the rotation-symmetry
// nullspace exactly.
struct LinearizedSystem {
    double beta;
    double gamma;
    int n;
    Eigen::MatrixXd op; // 2n x 2n
};

LinearizedSystem assemble_linearized(const ModelParams& params, int n);

// The decoupled heat mode: standard cell-centered Dirichlet Laplacian
// (ghost reflection), n x n. Leading eigenvalue tends to -pi^2.
Eigen::MatrixXd heat_mode_operator(int n);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues; // sorted by descending real part
    std::complex<double> leading_nontrivial;       // excludes the rotation zero mode
    std::complex<double> rotation_mode;            // the symmetry eigenvalue itself
};

// Full spectrum; the rotation mode is the eigenvalue whose eigenvector is
// most parallel to the constant vector.
SpectrumReport spectrum(const LinearizedSystem& sys);

// Locate the beta at which the leading nontrivial eigenvalue crosses zero,
// by bisection on its sign within [beta_lo, beta_hi] (which must bracket).
double find_bifurcation_beta(double gamma, int n, double beta_lo, double beta_hi,
                             double tol_rel = 1e-6);

// Null vector of the adjoint linearized operator, sampled at cell centers:
//   u_k = k [ sin(k a) - (1 - cos(k a)) cot(k/2) ],
//   v_k = k (1-gamma) [ sin(k a) + cos(k a) cot(k/2) ],
// with k = (1/beta) sqrt((1-gamma)/gamma). Requires k < 2 pi.
struct AdjointNullVector {
    double kappa;
    std::vector<double> u; // at cell centers
    std::vector<double> v;
};

AdjointNullVector adjoint_null(const ModelParams& params, int n);

// Closed form of int_0^1 (u_k + v_k) da = 2 (2 - gamma - (k/2) cot(k/2));
// strictly greater than 2 (1 - gamma) for 0 < k < 2 pi.
double adjoint_pair_integral(double gamma, double kappa);

// Midpoint quadrature of int (b u_k + psi v_k) da on cell centers; conserved
// along solutions of the linearized system.
double conserved_pairing(const std::vector<double>& b, const std::vector<double>& psi,
                         const AdjointNullVector& adj);

// E = (1/2) int (gamma (b - psi)^2 + psi^2) da by midpoint quadrature.
double energy(const std::vector<double>& b, const std::vector<double>& psi, double gamma);

} // namespace filband

#endif
