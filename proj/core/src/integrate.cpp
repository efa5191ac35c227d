#include "filband/integrate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "filband/numerics.hpp"

namespace filband {

void IntegratorConfig::validate() const {
    if (!(abs_tol > 0.0 && abs_tol <= 1e-3) || !(rel_tol > 0.0 && rel_tol <= 1e-3))
        throw std::invalid_argument("IntegratorConfig: tolerances must lie in (0, 1e-3]");
    if (!(tf >= t0))
        throw std::invalid_argument("IntegratorConfig: tf must not precede t0");
    if (max_step && !(*max_step > 0.0))
        throw std::invalid_argument("IntegratorConfig: max_step must be positive");
    double prev = t0;
    for (double ts : sample_times) {
        if (ts < prev || ts > tf)
            throw std::invalid_argument("IntegratorConfig: sample_times must be "
                                        "increasing and within [t0, tf]");
        prev = ts;
    }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// TR-BDF2 coefficients, gamma = 2 - sqrt(2). Both implicit stages share the
// diagonal weight d = gamma/2, so one LU of (I - d h J) serves the step.
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kGammaM = 2.0 - kSqrt2;
constexpr double kD = 0.5 * kGammaM;
constexpr double kW2 = 1.0 / (kGammaM * (2.0 - kGammaM));
constexpr double kW0 = (1.0 - kGammaM) * (1.0 - kGammaM) / (kGammaM * (2.0 - kGammaM));
// Embedded third-order companion weights give the local error estimate
// est = h (c1 f(y_n) + c2 f(y_mid) + c3 f(y_new)).
constexpr double kE1 = (kSqrt2 - 1.0) / 3.0;
constexpr double kE2 = -1.0 / 3.0;
constexpr double kE3 = (2.0 - kSqrt2) / 3.0;

struct Stepper {
    const OdeFunction& f;
    const IntegratorConfig& cfg;
    const int dim;
    StepStats stats;

    MatrixXd jac;          // df/dy, refreshed lazily
    Eigen::PartialPivLU<MatrixXd> lu;
    bool have_jac = false;
    double lu_h = -1.0;    // h the current LU was built with
    int steps_since_jac = 0;
    int last_newton_iters = 0;

    Stepper(const OdeFunction& f_, const IntegratorConfig& cfg_, int dim_)
        : f(f_), cfg(cfg_), dim(dim_) {}

    void eval(double t, const std::vector<double>& y, std::vector<double>& dydt) {
        f(t, y, dydt);
        ++stats.rhs_evals;
        for (double v : dydt)
            if (!std::isfinite(v)) throw IntegrationError("non-finite right hand side", t);
    }

    double wrms(const std::vector<double>& v, const std::vector<double>& yref) const {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(yref[i]);
            const double r = v[i] / sc;
            acc += r * r;
        }
        return std::sqrt(acc / dim);
    }

    void refresh_jacobian(double t, const std::vector<double>& y,
                          const std::vector<double>& fy) {
        VecFunction g = [&](const std::vector<double>& x, std::vector<double>& fx) {
            fx.resize(dim);
            f(t, x, fx);
        };
        jac = fd_jacobian(g, y, fy);
        stats.rhs_evals += dim;
        ++stats.jacobians;
        have_jac = true;
        steps_since_jac = 0;
        lu_h = -1.0;
    }

    void factor(double h) {
        if (h == lu_h) return;
        MatrixXd m = MatrixXd::Identity(dim, dim) - (kD * h) * jac;
        lu.compute(m);
        lu_h = h;
    }

    // Simplified Newton for  y - d h f(t, y) = rhs.  Returns false on
    // non-convergence. On success y holds the solution and fy its rhs value.
    bool solve_stage(double t, double h, const std::vector<double>& rhs_vec,
                     std::vector<double>& y, std::vector<double>& fy) {
        VectorXd delta(dim);
        double prev_norm = -1.0;
        for (int it = 0; it < 8; ++it) {
            eval(t, y, fy);
            VectorXd res(dim);
            for (int i = 0; i < dim; ++i) res(i) = y[i] - kD * h * fy[i] - rhs_vec[i];
            delta = lu.solve(res);
            double nrm = 0.0;
            for (int i = 0; i < dim; ++i) {
                y[i] -= delta(i);
                const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
                const double r = delta(i) / sc;
                nrm += r * r;
            }
            nrm = std::sqrt(nrm / dim);
            last_newton_iters = it + 1;
            if (nrm < 0.03) {
                eval(t, y, fy);
                return true;
            }
            if (prev_norm >= 0.0 && nrm > 0.9 * prev_norm && nrm > 0.1) return false;
            prev_norm = nrm;
        }
        return false;
    }
};

} // namespace

OdeSolution integrate_ode(const OdeFunction& f, const std::vector<double>& y0,
                          const IntegratorConfig& config) {
    config.validate();
    const int dim = static_cast<int>(y0.size());
    Stepper st(f, config, dim);

    OdeSolution out;
    std::size_t next_sample = 0;
    auto emit = [&](double ts, const std::vector<double>& ys) {
        out.times.push_back(ts);
        out.states.push_back(ys);
    };
    while (next_sample < config.sample_times.size() &&
           config.sample_times[next_sample] <= config.t0) {
        emit(config.t0, y0);
        ++next_sample;
    }
    if (config.sample_times.empty()) emit(config.t0, y0);

    double t = config.t0;
    std::vector<double> y = y0, fy(dim);
    if (config.tf == config.t0) {
        if (out.times.empty() || out.times.back() < config.tf) emit(config.tf, y);
        out.stats = st.stats;
        return out;
    }
    st.eval(t, y, fy);

    const double hmax = config.max_step.value_or(std::numeric_limits<double>::infinity());
    // First step from the scaled size of f, as in standard starters.
    double h;
    {
        const double d1 = st.wrms(fy, y);
        h = std::min({config.tf - config.t0, hmax, 0.01 / (d1 + 1e-8)});
        h = std::max(h, 1e-10);
    }

    std::vector<double> ymid(dim), fmid(dim), ynew(dim), fnew(dim), rhs_vec(dim), est(dim);
    bool just_rejected = false;

    while (t < config.tf) {
        h = std::min({h, hmax, config.tf - t});
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow", t);

        if (!st.have_jac) st.refresh_jacobian(t, y, fy);
        st.factor(h);

        bool step_ok = false;
        double err = 0.0;
        try {
            // TR stage to t + gamma h.
            for (int i = 0; i < dim; ++i) {
                rhs_vec[i] = y[i] + kD * h * fy[i];
                ymid[i] = y[i] + kGammaM * h * fy[i];
            }
            bool conv = st.solve_stage(t + kGammaM * h, h, rhs_vec, ymid, fmid);
            if (conv) {
                // BDF2 stage to t + h, seeded by linear extrapolation.
                for (int i = 0; i < dim; ++i) {
                    rhs_vec[i] = kW2 * ymid[i] - kW0 * y[i];
                    ynew[i] = y[i] + (ymid[i] - y[i]) / kGammaM;
                }
                conv = st.solve_stage(t + h, h, rhs_vec, ynew, fnew);
            }
            if (!conv) {
                if (st.steps_since_jac > 0) {
                    st.refresh_jacobian(t, y, fy); // retry same h with fresh Jacobian
                    continue;
                }
                ++st.stats.rejected;
                h *= 0.25;
                just_rejected = true;
                continue;
            }

            // Filtered error estimate: (I - d h J)^{-1} est, reusing the LU.
            VectorXd raw(dim);
            for (int i = 0; i < dim; ++i)
                raw(i) = h * (kE1 * fy[i] + kE2 * fmid[i] + kE3 * fnew[i]);
            VectorXd filt = st.lu.solve(raw);
            double acc = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double sc = config.abs_tol +
                                  config.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double r = filt(i) / sc;
                acc += r * r;
            }
            err = std::sqrt(acc / dim);
            step_ok = err <= 1.0 && std::isfinite(err);
        } catch (const PositivityError&) {
            step_ok = false;
            err = -1.0; // density positivity failed inside a stage: shrink hard
        }

        if (!step_ok) {
            ++st.stats.rejected;
            just_rejected = true;
            if (err < 0.0) {
                h *= 0.25;
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    throw IntegrationError("density positivity failure", t);
            } else {
                h *= std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.1, 0.5);
            }
            continue;
        }

        // Accepted: interpolate pending samples with cubic Hermite.
        const double tnew = (config.tf - (t + h) < 1e-14 * std::max(1.0, config.tf))
                                ? config.tf
                                : t + h;
        while (next_sample < config.sample_times.size() &&
               config.sample_times[next_sample] <= tnew) {
            const double ts = config.sample_times[next_sample];
            const double th = (ts - t) / h;
            const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
            const double h10 = th * (1.0 - th) * (1.0 - th);
            const double h01 = th * th * (3.0 - 2.0 * th);
            const double h11 = th * th * (th - 1.0);
            std::vector<double> ys(dim);
            for (int i = 0; i < dim; ++i)
                ys[i] = h00 * y[i] + h10 * h * fy[i] + h01 * ynew[i] + h11 * h * fnew[i];
            emit(ts, ys);
            ++next_sample;
        }

        ++st.stats.accepted;
        ++st.steps_since_jac;
        t = tnew;
        y.swap(ynew);
        fy.swap(fnew);

        double fac = 0.9 * std::pow(std::max(err, 1e-10), -1.0 / 3.0);
        fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 5.0);
        just_rejected = false;
        h *= fac;

        // A sluggish Newton or a long streak marks the Jacobian stale.
        if (st.last_newton_iters > 4 || st.steps_since_jac >= 25) st.have_jac = false;
    }

    if (out.times.empty() || out.times.back() < config.tf) emit(config.tf, y);
    out.stats = st.stats;
    return out;
}

Trajectory integrate(const BandState& state0, const ModelParams& params,
                     const IntegratorConfig& config) {
    OdeFunction f = [&params](double, const std::vector<double>& y,
                              std::vector<double>& dydt) { rhs_flat(y, params, dydt); };
    OdeSolution sol = integrate_ode(f, pack(state0), config);
    Trajectory traj;
    traj.times = std::move(sol.times);
    traj.states.reserve(sol.states.size());
    for (const auto& ys : sol.states) traj.states.push_back(unpack(ys));
    traj.stats = sol.stats;
    return traj;
}

} // namespace filband
