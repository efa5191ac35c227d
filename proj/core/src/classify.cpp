#include "filband/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "filband/semidiscrete.hpp"

namespace filband {

std::string to_string(MotionClass c) {
    switch (c) {
        case MotionClass::Stationary: return "stationary";
        case MotionClass::Traveling: return "traveling";
        case MotionClass::Spinning: return "spinning";
        case MotionClass::Whirling: return "whirling";
        case MotionClass::Chaotic: return "chaotic";
    }
    return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized autocorrelation peak of a detrended signal; returns {peak, lag}.
// The search starts past the first zero crossing so the trivial lag-0
// maximum is skipped.
std::pair<double, int> autocorr_peak(const std::vector<double>& x) {
    const int m = static_cast<int>(x.size());
    if (m < 8) return {0.0, 0};
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= m;
    std::vector<double> d(m);
    double var = 0.0;
    for (int i = 0; i < m; ++i) {
        d[i] = x[i] - mean;
        var += d[i] * d[i];
    }
    if (var < 1e-24) return {0.0, 0};

    auto corr = [&](int lag) {
        double acc = 0.0;
        for (int i = 0; i + lag < m; ++i) acc += d[i] * d[i + lag];
        return acc / var;
    };
    int lag = 1;
    while (lag < m / 2 && corr(lag) > 0.0) ++lag; // pass the first zero crossing
    double best = 0.0;
    int best_lag = 0;
    for (; lag < m / 2; ++lag) {
        const double c = corr(lag);
        if (c > best) {
            best = c;
            best_lag = lag;
        }
    }
    return {best, best_lag};
}

// Kasa algebraic circle fit: x^2 + y^2 = 2 a x + 2 b y + c.
struct CircleFit {
    Vec2 center;
    double radius;
};

CircleFit fit_circle(const std::vector<Vec2>& pts) {
    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, sxz = 0, syz = 0, sz = 0;
    const double m = static_cast<double>(pts.size());
    for (const Vec2& p : pts) {
        const double zz = p.x * p.x + p.y * p.y;
        sxx += p.x * p.x;
        sxy += p.x * p.y;
        syy += p.y * p.y;
        sx += p.x;
        sy += p.y;
        sxz += p.x * zz;
        syz += p.y * zz;
        sz += zz;
    }
    // Normal equations for (2a, 2b, c).
    Eigen::Matrix3d mat;
    Eigen::Vector3d rhs;
    mat << sxx, sxy, sx, sxy, syy, sy, sx, sy, m;
    rhs << sxz, syz, sz;
    const Eigen::Vector3d sol = mat.fullPivLu().solve(rhs);
    const Vec2 c{0.5 * sol(0), 0.5 * sol(1)};
    const double r2 = sol(2) + c.x * c.x + c.y * c.y;
    return {c, r2 > 0.0 ? std::sqrt(r2) : 0.0};
}

} // namespace

MotionReport classify_motion(const Trajectory& traj, const ModelParams& params,
                             double t_begin, double t_end, const ClassifyOptions& opts) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        if (traj.times[i] >= t_begin && traj.times[i] <= t_end) idx.push_back(int(i));
    if (idx.size() < 8)
        throw std::invalid_argument("classify_motion: window holds fewer than 8 samples");

    const int m = static_cast<int>(idx.size());
    const int n = traj.states[idx[0]].n();
    const double window = traj.times[idx.back()] - traj.times[idx.front()];

    // Exact node velocities from the RHS at each sample.
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0, vsum = 0.0;
    std::vector<Vec2> vmean(m);          // ensemble mean velocity per sample
    std::vector<Vec2> com(m);            // center of mass path
    std::vector<double> y_end(m);        // lab-frame y of the first node
    std::vector<double> phimean(m);
    for (int k = 0; k < m; ++k) {
        const BandState& s = traj.states[idx[k]];
        const RhsEval r = rhs(s, params);
        Vec2 vm{0, 0}, cm{0, 0};
        double pm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sp = norm(r.dz_dt[i]);
            vmin = std::min(vmin, sp);
            vmax = std::max(vmax, sp);
            vsum += sp;
            vm += r.dz_dt[i];
            cm += s.z[i];
            pm += s.phi[i];
        }
        vmean[k] = vm / n;
        com[k] = cm / n;
        phimean[k] = pm / n;
        y_end[k] = s.z[0].y;
    }
    const double mean_speed = vsum / (m * n);

    MotionReport rep;
    rep.diag.mean_speed = mean_speed;
    rep.diag.speed_spread = mean_speed > 0.0 ? (vmax - vmin) / mean_speed : 0.0;
    rep.diag.rotation_rate = (phimean.back() - phimean.front()) / window;
    double com_disp = 0.0;
    for (int k = 0; k < m; ++k) com_disp = std::max(com_disp, norm(com[k] - com[0]));
    rep.diag.com_displacement = com_disp;

    // Mean travel direction and its drift across the window.
    Vec2 vtot{0, 0};
    for (const Vec2& v : vmean) vtot += v;
    const double dir = std::atan2(vtot.y, vtot.x);
    rep.diag.direction_deg = dir * 180.0 / kPi;
    double drift = 0.0;
    for (const Vec2& v : vmean) {
        if (norm(v) < 1e-14) continue;
        double dth = std::atan2(v.y, v.x) - dir;
        while (dth > kPi) dth -= 2 * kPi;
        while (dth < -kPi) dth += 2 * kPi;
        drift = std::max(drift, std::abs(dth));
    }

    const auto [peak, lag] = autocorr_peak(y_end);
    rep.diag.autocorr_peak = peak;
    const bool periodic = peak > opts.autocorr_peak && lag > 0;
    if (periodic) {
        const double dt = window / (m - 1);
        rep.diag.period = lag * dt;
        rep.diag.window_too_short = window < 3.0 * (*rep.diag.period);
    }

    if (vmax < opts.stationary_speed) {
        rep.cls = MotionClass::Stationary;
        return rep;
    }
    if (rep.diag.speed_spread < opts.traveling_spread &&
        drift < opts.traveling_drift_deg * kPi / 180.0) {
        rep.cls = MotionClass::Traveling;
        return rep;
    }
    if (com_disp < opts.spinning_com_disp && periodic) {
        rep.cls = MotionClass::Spinning;
        return rep;
    }
    // Whirling: center of mass on an arc about a far-away center.
    {
        const CircleFit fit = fit_circle(com);
        rep.diag.fit_radius = fit.radius;
        double band_len = 0.0;
        for (int k = 0; k < m; ++k)
            band_len += norm(traj.states[idx[k]].z[n - 1] - traj.states[idx[k]].z[0]);
        band_len /= m;
        // Angular progress of the center of mass about the fitted center.
        double sweep = 0.0;
        double prev = std::atan2(com[0].y - fit.center.y, com[0].x - fit.center.x);
        for (int k = 1; k < m; ++k) {
            double th = std::atan2(com[k].y - fit.center.y, com[k].x - fit.center.x);
            double dth = th - prev;
            while (dth > kPi) dth -= 2 * kPi;
            while (dth < -kPi) dth += 2 * kPi;
            sweep += dth;
            prev = th;
        }
        if (periodic && fit.radius > opts.whirl_radius_ratio * band_len &&
            std::abs(sweep) > 0.5) {
            rep.cls = MotionClass::Whirling;
            return rep;
        }
    }
    rep.cls = MotionClass::Chaotic;
    return rep;
}

} // namespace filband
