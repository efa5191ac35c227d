#include "filband/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace filband {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

LinearizedSystem assemble_linearized(const ModelParams& params, int n) {
    if (n < 8) throw std::domain_error("assemble_linearized: need n >= 8");
    const double g = params.gamma;
    const double b2 = params.beta * params.beta;
    const double h = 1.0 / n;
    const double ih2 = 1.0 / (h * h);

    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    auto B = [&](int j) { return j; };
    auto P = [&](int j) { return n + j; };

    // chi = gamma b - psi enters the b rows only through this pair of weights.
    auto add_chi = [&](int row, int cell, double w) {
        op(row, B(cell)) += w * g;
        op(row, P(cell)) -= w;
    };

    // b rows, interior: centered D2 of chi.
    for (int j = 1; j < n - 1; ++j) {
        add_chi(B(j), j - 1, ih2);
        add_chi(B(j), j, -2.0 * ih2);
        add_chi(B(j), j + 1, ih2);
    }
    // b rows, boundary cells: cubic D2 at the first center over the nodes
    // {0, h/2, 3h/2, 5h/2}, with the wall value chi(0) = (gamma-1) psi(0)
    // and psi(0) extrapolated with zero slope:
    //   D2 chi(h/2)  = [16/5 chi(0) - 5 chi_1 + 2 chi_2 - 1/5 chi_3]/h^2,
    //   psi(0)       = (225 psi_1 - 50 psi_2 + 9 psi_3)/184.
    {
        const double wall = 16.0 / 5.0 * ih2;
        const double e1 = 225.0 / 184.0, e2 = -50.0 / 184.0, e3 = 9.0 / 184.0;
        // left
        op(B(0), P(0)) += wall * (g - 1.0) * e1;
        op(B(0), P(1)) += wall * (g - 1.0) * e2;
        op(B(0), P(2)) += wall * (g - 1.0) * e3;
        add_chi(B(0), 0, -5.0 * ih2);
        add_chi(B(0), 1, 2.0 * ih2);
        add_chi(B(0), 2, -0.2 * ih2);
        // right (mirrored)
        op(B(n - 1), P(n - 1)) += wall * (g - 1.0) * e1;
        op(B(n - 1), P(n - 2)) += wall * (g - 1.0) * e2;
        op(B(n - 1), P(n - 3)) += wall * (g - 1.0) * e3;
        add_chi(B(n - 1), n - 1, -5.0 * ih2);
        add_chi(B(n - 1), n - 2, 2.0 * ih2);
        add_chi(B(n - 1), n - 3, -0.2 * ih2);
    }

    // psi rows: D2 psi + (b - psi)/beta^2. The boundary-cell D2 folds in
    // psi'(0) = 0:  D2 psi(h/2) = (-25 psi_1 + 26 psi_2 - psi_3)/(23 h^2).
    for (int j = 1; j < n - 1; ++j) {
        op(P(j), P(j - 1)) += ih2;
        op(P(j), P(j)) += -2.0 * ih2;
        op(P(j), P(j + 1)) += ih2;
    }
    op(P(0), P(0)) += -25.0 / 23.0 * ih2;
    op(P(0), P(1)) += 26.0 / 23.0 * ih2;
    op(P(0), P(2)) += -1.0 / 23.0 * ih2;
    op(P(n - 1), P(n - 1)) += -25.0 / 23.0 * ih2;
    op(P(n - 1), P(n - 2)) += 26.0 / 23.0 * ih2;
    op(P(n - 1), P(n - 3)) += -1.0 / 23.0 * ih2;
    for (int j = 0; j < n; ++j) {
        op(P(j), B(j)) += 1.0 / b2;
        op(P(j), P(j)) -= 1.0 / b2;
    }

    return {params.beta, params.gamma, n, std::move(op)};
}

Eigen::MatrixXd heat_mode_operator(int n) {
    const double ih2 = static_cast<double>(n) * n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        a(j, j) = -2.0 * ih2;
        if (j > 0) a(j, j - 1) = ih2;
        if (j + 1 < n) a(j, j + 1) = ih2;
    }
    a(0, 0) = -3.0 * ih2;
    a(n - 1, n - 1) = -3.0 * ih2;
    return a;
}

SpectrumReport spectrum(const LinearizedSystem& sys) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(sys.op);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigenvalue solver failed");

    const int dim = 2 * sys.n;
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();

    // Rotation mode: eigenvector most parallel to the constant vector.
    int rot = 0;
    double best = -1.0;
    for (int k = 0; k < dim; ++k) {
        std::complex<double> s = 0.0;
        for (int i = 0; i < dim; ++i) s += vecs(i, k);
        const double align = std::abs(s) / (std::sqrt(double(dim)) * vecs.col(k).norm());
        if (align > best) {
            best = align;
            rot = k;
        }
    }

    SpectrumReport rep;
    rep.rotation_mode = vals(rot);
    rep.eigenvalues.reserve(dim);
    for (int k = 0; k < dim; ++k) rep.eigenvalues.push_back(vals(k));
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](auto a, auto b) { return a.real() > b.real(); });

    rep.leading_nontrivial = {-std::numeric_limits<double>::infinity(), 0.0};
    for (int k = 0; k < dim; ++k) {
        if (k == rot) continue;
        if (vals(k).real() > rep.leading_nontrivial.real()) rep.leading_nontrivial = vals(k);
    }
    return rep;
}

double find_bifurcation_beta(double gamma, int n, double beta_lo, double beta_hi,
                             double tol_rel) {
    auto lead = [&](double beta) {
        return spectrum(assemble_linearized(ModelParams(beta, gamma), n))
            .leading_nontrivial.real();
    };
    double flo = lead(beta_lo), fhi = lead(beta_hi);
    if (flo * fhi > 0.0)
        throw std::invalid_argument("find_bifurcation_beta: interval does not bracket");
    while (beta_hi - beta_lo > tol_rel * beta_hi) {
        const double mid = 0.5 * (beta_lo + beta_hi);
        const double fm = lead(mid);
        if (fm * flo > 0.0) {
            beta_lo = mid;
            flo = fm;
        } else {
            beta_hi = mid;
        }
    }
    return 0.5 * (beta_lo + beta_hi);
}

AdjointNullVector adjoint_null(const ModelParams& params, int n) {
    const double g = params.gamma;
    const double kappa = std::sqrt((1.0 - g) / g) / params.beta;
    if (!(kappa < kTwoPi))
        throw std::domain_error("adjoint_null: kappa >= 2 pi (at or past the bifurcation)");

    const double cot_half = 1.0 / std::tan(0.5 * kappa);
    Grid grid(n);
    AdjointNullVector adj;
    adj.kappa = kappa;
    adj.u.resize(n);
    adj.v.resize(n);
    for (int i = 0; i < n; ++i) {
        const double a = grid.center(i);
        const double s = std::sin(kappa * a), c = std::cos(kappa * a);
        adj.u[i] = kappa * (s - (1.0 - c) * cot_half);
        adj.v[i] = kappa * (1.0 - g) * (s + c * cot_half);
    }
    return adj;
}

double adjoint_pair_integral(double gamma, double kappa) {
    if (!(kappa > 0.0 && kappa < kTwoPi))
        throw std::domain_error("adjoint_pair_integral: kappa outside (0, 2 pi)");
    return 2.0 * (2.0 - gamma - 0.5 * kappa / std::tan(0.5 * kappa));
}

double conserved_pairing(const std::vector<double>& b, const std::vector<double>& psi,
                         const AdjointNullVector& adj) {
    const std::size_t n = adj.u.size();
    if (b.size() != n || psi.size() != n)
        throw std::invalid_argument("conserved_pairing: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += b[i] * adj.u[i] + psi[i] * adj.v[i];
    return acc / static_cast<double>(n);
}

double energy(const std::vector<double>& b, const std::vector<double>& psi, double gamma) {
    if (b.size() != psi.size()) throw std::invalid_argument("energy: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = b[i] - psi[i];
        acc += gamma * d * d + psi[i] * psi[i];
    }
    return 0.5 * acc / static_cast<double>(b.size());
}

} // namespace filband
