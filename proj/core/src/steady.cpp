#include "filband/steady.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "filband/numerics.hpp"
#include "filband/semidiscrete.hpp"

namespace filband {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double mean_phi(const BandState& s) {
    double m = 0.0;
    for (double p : s.phi) m += p;
    return m / s.n();
}

// Unknown layout for the Newton solve: pack(state) followed by (Vx, Vy).
std::vector<double> pack_unknowns(const BandState& s, Vec2 v) {
    std::vector<double> y = pack(s);
    y.push_back(v.x);
    y.push_back(v.y);
    return y;
}

void unpack_unknowns(const std::vector<double>& y, BandState& s, Vec2& v) {
    std::vector<double> ys(y.begin(), y.end() - 2);
    s = unpack(ys);
    v = {y[y.size() - 2], y[y.size() - 1]};
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

std::vector<double> steady_residual(const BandState& state, Vec2 velocity,
                                    const ModelParams& params) {
    const int n = state.n();
    const RhsEval r = rhs(state, params);
    std::vector<double> res(3 * n + 2);
    for (int i = 0; i < n; ++i) {
        res[2 * i] = r.dz_dt[i].x - velocity.x;
        res[2 * i + 1] = r.dz_dt[i].y - velocity.y;
        res[2 * n + i] = r.dphi_dt[i];
    }
    Vec2 zbar{0.0, 0.0};
    for (const Vec2& z : state.z) zbar += z;
    res[3 * n] = zbar.x / n;
    res[3 * n + 1] = zbar.y / n;
    return res;
}

TravelingWave newton_solve(const BandState& guess, Vec2 velocity_guess,
                           const ModelParams& params, const NewtonOptions& opts) {
    const int n = guess.n();
    const double phi_ref = mean_phi(guess);

    // Augmented residual: the square system plus the rotational phase pin
    // mean(phi) = phi_ref. Consistent at solutions, full column rank.
    VecFunction f_aug = [&](const std::vector<double>& y, std::vector<double>& fy) {
        BandState s;
        Vec2 v;
        unpack_unknowns(y, s, v);
        fy = steady_residual(s, v, params);
        double m = 0.0;
        for (double p : s.phi) m += p;
        fy.push_back(m / s.phi.size() - phi_ref);
    };

    std::vector<double> y = pack_unknowns(guess, velocity_guess);
    std::vector<double> fy;
    f_aug(y, fy);
    double fnorm = inf_norm(fy);

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (fnorm < opts.tol) break;
        const MatrixXd jac = fd_jacobian(f_aug, y, fy);
        const VectorXd res = Eigen::Map<const VectorXd>(fy.data(), fy.size());
        const VectorXd step = jac.colPivHouseholderQr().solve(res);

        // Backtracking on the residual norm.
        double lambda = 1.0;
        std::vector<double> ytrial(y.size()), ftrial;
        double fnew = fnorm;
        bool improved = false;
        for (int bt = 0; bt < 10; ++bt) {
            for (std::size_t i = 0; i < y.size(); ++i) ytrial[i] = y[i] - lambda * step(i);
            try {
                f_aug(ytrial, ftrial);
                fnew = inf_norm(ftrial);
            } catch (const PositivityError&) {
                lambda *= 0.5;
                continue;
            }
            if (fnew < fnorm * (1.0 - 1e-4 * lambda) || fnew < opts.tol) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved)
            throw std::runtime_error("newton_solve: line search stalled, residual " +
                                     std::to_string(fnorm));
        y = ytrial;
        fy = ftrial;
        fnorm = fnew;
    }
    if (!(fnorm < opts.tol))
        throw std::runtime_error("newton_solve: no convergence after " +
                                 std::to_string(opts.max_iterations) +
                                 " iterations, residual " + std::to_string(fnorm));

    TravelingWave wave;
    unpack_unknowns(y, wave.state, wave.velocity);
    wave.beta = params.beta;
    wave.residual_norm = inf_norm(steady_residual(wave.state, wave.velocity, params));
    if (opts.tag_stability)
        wave.stable = stability(wave, params, opts.symmetry_tol).stable;
    return wave;
}

StabilityReport stability(const TravelingWave& wave, const ModelParams& params,
                          double symmetry_tol) {
    const int n = wave.state.n();
    const std::vector<double> y0 = pack(wave.state);
    std::vector<double> f0(3 * n);
    rhs_flat(y0, params, f0);
    VecFunction f = [&](const std::vector<double>& y, std::vector<double>& fy) {
        rhs_flat(y, params, fy);
    };
    const MatrixXd jac = fd_jacobian(f, y0, f0);

    Eigen::EigenSolver<MatrixXd> es(jac);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("stability: eigenvalue solver failed");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    const int dim = 3 * n;

    // Symmetry subspace: two translations and the rotation generator
    // (dz = z^perp, dphi = 1).
    MatrixXd sym = MatrixXd::Zero(dim, 3);
    for (int i = 0; i < n; ++i) {
        sym(2 * i, 0) = 1.0;
        sym(2 * i + 1, 1) = 1.0;
        sym(2 * i, 2) = -wave.state.z[i].y;
        sym(2 * i + 1, 2) = wave.state.z[i].x;
        sym(2 * n + i, 2) = 1.0;
    }
    const Eigen::HouseholderQR<MatrixXd> qr(sym);
    const MatrixXd q = qr.householderQ() * MatrixXd::Identity(dim, 3);

    std::vector<int> in_band;
    for (int k = 0; k < dim; ++k)
        if (std::abs(vals(k)) < symmetry_tol) in_band.push_back(k);
    if (in_band.size() < 3)
        throw std::runtime_error("stability: fewer than 3 eigenvalues within the "
                                 "symmetry tolerance band; Jacobian too rough");

    // Ambiguity check: everything in the band must belong to the symmetry
    // subspace etc.; alignment = |Q^T v| / |v| for each candidate.
    std::vector<std::pair<double, int>> aligned;
    for (int k : in_band) {
        const Eigen::VectorXcd v = vecs.col(k);
        const double a = (q.transpose() * v).norm() / v.norm();
        aligned.push_back({a, k});
    }
    std::sort(aligned.begin(), aligned.end(), std::greater<>());
    for (std::size_t j = 3; j < aligned.size(); ++j) {
        if (aligned[j].first < 0.9)
            throw std::runtime_error(
                "stability: non-symmetry eigenvalue inside the symmetry band "
                "(|lambda| < tol); stability is ambiguous here");
    }
    // More than three symmetry-aligned near-zero eigenvalues is equally
    // ambiguous (a genuine mode crossing zero hides among them).
    if (aligned.size() > 3 && aligned[3].first >= 0.9)
        throw std::runtime_error("stability: more than 3 eigenvalues in the symmetry "
                                 "band; a genuine mode may be crossing zero");

    std::vector<int> excluded = {aligned[0].second, aligned[1].second, aligned[2].second};

    StabilityReport rep;
    bool stable = true;
    for (int k = 0; k < dim; ++k) {
        if (std::find(excluded.begin(), excluded.end(), k) != excluded.end()) {
            rep.symmetry_excluded.push_back(vals(k));
            continue;
        }
        rep.eigenvalues.push_back(vals(k));
        if (vals(k).real() >= 0.0) stable = false;
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](auto a, auto b) { return a.real() > b.real(); });
    rep.stable = stable;
    return rep;
}

double phi_amplitude(const BandState& state) {
    const double m = mean_phi(state);
    double amp = 0.0;
    for (double p : state.phi) amp = std::max(amp, std::abs(p - m));
    return amp;
}

namespace {

// One pseudo-arclength corrector step: unknowns (z, phi, V, beta), equations
// = square residual + mean(phi) pin + tangent condition.
bool arclength_correct(std::vector<double>& y_ext, const std::vector<double>& y_pred,
                       const VectorXd& tangent, double gamma, double phi_ref,
                       const NewtonOptions& opts) {
    const std::size_t m = y_ext.size();
    VecFunction f_ext = [&](const std::vector<double>& y, std::vector<double>& fy) {
        BandState s;
        Vec2 v;
        std::vector<double> ysv(y.begin(), y.end() - 1);
        unpack_unknowns(ysv, s, v);
        const double beta = y.back();
        if (!(beta > 0.0)) throw PositivityError(-1, beta, 0.0);
        fy = steady_residual(s, v, ModelParams(beta, gamma));
        double mp = 0.0;
        for (double p : s.phi) mp += p;
        fy.push_back(mp / s.phi.size() - phi_ref);
        double arc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) arc += (y[i] - y_pred[i]) * tangent(i);
        fy.push_back(arc);
    };

    std::vector<double> fy;
    try {
        f_ext(y_ext, fy);
    } catch (const PositivityError&) {
        return false;
    }
    double fnorm = inf_norm(fy);
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (fnorm < opts.tol) return true;
        MatrixXd jac;
        try {
            jac = fd_jacobian(f_ext, y_ext, fy);
        } catch (const PositivityError&) {
            return false;
        }
        const VectorXd res = Eigen::Map<const VectorXd>(fy.data(), fy.size());
        const VectorXd step = jac.colPivHouseholderQr().solve(res);
        double lambda = 1.0;
        bool improved = false;
        std::vector<double> ytrial(m), ftrial;
        for (int bt = 0; bt < 10; ++bt) {
            for (std::size_t i = 0; i < m; ++i) ytrial[i] = y_ext[i] - lambda * step(i);
            try {
                f_ext(ytrial, ftrial);
            } catch (const PositivityError&) {
                lambda *= 0.5;
                continue;
            }
            const double fnew = inf_norm(ftrial);
            if (fnew < fnorm * (1.0 - 1e-4 * lambda) || fnew < opts.tol) {
                y_ext = ytrial;
                fy = ftrial;
                fnorm = fnew;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) return false;
    }
    return fnorm < opts.tol;
}

} // namespace

Branch continue_branch(const TravelingWave& start, const ModelParams& params,
                       double beta_min, double beta_max, const ContinuationOptions& opts) {
    Branch branch;
    branch.points.push_back(start);
    const double gamma = params.gamma;

    double dbeta = opts.initial_dbeta;
    bool arclength = false;
    VectorXd tangent;
    std::vector<double> y_prev = pack_unknowns(start.state, start.velocity);
    y_prev.push_back(start.beta);

    while (static_cast<int>(branch.points.size()) < opts.max_points) {
        const TravelingWave& last = branch.points.back();

        if (!arclength) {
            const double beta_next = last.beta + dbeta;
            if (beta_next < beta_min || beta_next > beta_max) {
                branch.termination = "left beta range";
                break;
            }
            // Secant predictor in beta when two points are available.
            BandState seed = last.state;
            Vec2 vseed = last.velocity;
            if (branch.points.size() >= 2) {
                const TravelingWave& prev = branch.points[branch.points.size() - 2];
                const double w = dbeta / (last.beta - prev.beta);
                for (int i = 0; i < seed.n(); ++i) {
                    seed.z[i] += w * (last.state.z[i] - prev.state.z[i]);
                    seed.phi[i] += w * (last.state.phi[i] - prev.state.phi[i]);
                }
                vseed += w * (last.velocity - prev.velocity);
            }
            try {
                TravelingWave next =
                    newton_solve(seed, vseed, ModelParams(beta_next, gamma), opts.newton);
                branch.points.push_back(next);
                if (std::abs(dbeta) * opts.grow <= opts.max_dbeta) dbeta *= opts.grow;
                continue;
            } catch (const std::exception&) {
                dbeta *= 0.5;
                if (std::abs(dbeta) >= opts.min_dbeta) continue;
                // Natural steps have collapsed: a fold. Go pseudo-arclength.
                arclength = true;
            }
        }

        // Pseudo-arclength stepping. Tangent from the last secant, normalized
        // with the state part; beta becomes an unknown.
        std::vector<double> y_last = pack_unknowns(last.state, last.velocity);
        y_last.push_back(last.beta);
        const std::size_t m = y_last.size();
        if (branch.points.size() >= 2) {
            const TravelingWave& prev = branch.points[branch.points.size() - 2];
            std::vector<double> y_pv = pack_unknowns(prev.state, prev.velocity);
            y_pv.push_back(prev.beta);
            tangent = VectorXd(m);
            for (std::size_t i = 0; i < m; ++i) tangent(i) = y_last[i] - y_pv[i];
            tangent.normalize();
        } else {
            tangent = VectorXd::Zero(m);
            tangent(m - 1) = (dbeta > 0 ? 1.0 : -1.0);
        }

        double ds = std::max(std::abs(dbeta) * 20.0, 1e-4);
        bool stepped = false;
        const double phi_ref0 = mean_phi(last.state);
        for (int attempt = 0; attempt < 30 && !stepped; ++attempt) {
            std::vector<double> y_pred(m);
            for (std::size_t i = 0; i < m; ++i) y_pred[i] = y_last[i] + ds * tangent(i);
            // The phase pin follows the predictor's phi so rotation stays fixed.
            std::vector<double> y_ext = y_pred;
            if (arclength_correct(y_ext, y_pred, tangent, gamma, phi_ref0, opts.newton)) {
                BandState s;
                Vec2 v;
                std::vector<double> ysv(y_ext.begin(), y_ext.end() - 1);
                unpack_unknowns(ysv, s, v);
                const double beta_new = y_ext.back();
                if (beta_new < beta_min || beta_new > beta_max) {
                    branch.termination = "left beta range";
                    return branch;
                }
                TravelingWave next;
                next.state = std::move(s);
                next.velocity = v;
                next.beta = beta_new;
                next.residual_norm = inf_norm(
                    steady_residual(next.state, next.velocity, ModelParams(beta_new, gamma)));
                if (opts.newton.tag_stability) {
                    try {
                        next.stable =
                            stability(next, ModelParams(beta_new, gamma), opts.newton.symmetry_tol)
                                .stable;
                    } catch (const std::exception&) {
                        next.stable = false; // ambiguous right at the fold
                    }
                }
                // A sign change of d(beta) along the arc marks the fold.
                if (branch.points.size() >= 2) {
                    const double d1 = last.beta - branch.points[branch.points.size() - 2].beta;
                    const double d2 = beta_new - last.beta;
                    if (d1 * d2 < 0.0) branch.fold_locations.push_back(last.beta);
                }
                branch.points.push_back(std::move(next));
                stepped = true;
            } else {
                ds *= 0.5;
                if (ds < 1e-9) {
                    branch.termination = "arclength step underflow";
                    return branch;
                }
            }
        }
        if (!stepped) {
            branch.termination = "arclength step failed";
            return branch;
        }
    }
    if (branch.termination.empty()) branch.termination = "max points reached";
    return branch;
}

} // namespace filband
