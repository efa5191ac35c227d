#include "filband/semidiscrete.hpp"

#include <cmath>

namespace filband {

EdgeValues reconstruct_edges(const BandState& state, const ModelParams& params) {
    const int n = state.n();
    const double h = 1.0 / n;
    EdgeValues e;
    e.phi.assign(n + 1, 0.0);
    e.dphi.assign(n + 1, 0.0);
    e.dz.assign(n + 1, Vec2{});

    for (int i = 1; i < n; ++i) {
        e.phi[i] = 0.5 * (state.phi[i] + state.phi[i - 1]);
        e.dphi[i] = (state.phi[i] - state.phi[i - 1]) / h;
        e.dz[i] = (state.z[i] - state.z[i - 1]) / h;
    }
    e.phi[0] = 1.125 * state.phi[0] - 0.125 * state.phi[1];
    e.phi[n] = 1.125 * state.phi[n - 1] - 0.125 * state.phi[n - 2];

    const double half_sqrt12_beta = 0.5 * std::sqrt(12.0) * params.beta;
    for (int i = 1; i < n; ++i) {
        const double c = dot(perp(e.dz[i]), omega(e.phi[i]));
        const double qhalf = half_sqrt12_beta * std::abs(e.dphi[i]);
        if (!(c > qhalf)) throw PositivityError(i, c, qhalf);
    }
    return e;
}

RhsEval rhs(const BandState& state, const ModelParams& params) {
    const int n = state.n();
    const double h = 1.0 / n;
    const double gamma = params.gamma;
    const double beta2 = params.beta * params.beta;

    const EdgeValues e = reconstruct_edges(state, params);

    // Edge fluxes and sources. f, g, s at indices 0..n.
    std::vector<Vec2> f(n + 1);
    std::vector<double> g(n + 1, 0.0), s(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
        const Vec2 w = omega(e.phi[i]);
        const double c = dot(perp(e.dz[i]), w);
        const PressurePair p = pressure_kernels(c, e.dphi[i], params.beta);
        const double len = norm(e.dz[i]);
        if (len < 1e-12)
            throw std::runtime_error("rhs: |dz| vanished at edge " + std::to_string(i) +
                                     ", tension direction undefined");
        f[i] = p.p0 * perp(w) + (gamma / len) * e.dz[i];
        g[i] = p.p1;
        s[i] = p.p0 * dot(e.dz[i], w) / beta2;
    }
    f[0] = (1.0 - gamma) * perp(omega(e.phi[0]));
    f[n] = (1.0 - gamma) * perp(omega(e.phi[n]));
    // g and s already vanish at the boundary edges.

    RhsEval out;
    out.dz_dt.resize(n);
    out.dphi_dt.resize(n);
    for (int i = 0; i < n; ++i) {
        out.dz_dt[i] = (f[i + 1] - f[i]) / h;
        out.dphi_dt[i] = (g[i + 1] - g[i]) / h + 0.5 * (s[i] + s[i + 1]);
    }
    return out;
}

void rhs_flat(const std::vector<double>& y, const ModelParams& params,
              std::vector<double>& dydt) {
    const BandState state = unpack(y);
    const RhsEval r = rhs(state, params);
    const int n = state.n();
    dydt.resize(3 * n);
    for (int i = 0; i < n; ++i) {
        dydt[2 * i] = r.dz_dt[i].x;
        dydt[2 * i + 1] = r.dz_dt[i].y;
        dydt[2 * n + i] = r.dphi_dt[i];
    }
}

} // namespace filband
