#include "filband/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <stdexcept>

#include "filband/io.hpp"
#include "filband/semidiscrete.hpp"
#include "filband/steady.hpp"

namespace filband {

namespace {
constexpr double kPi = std::numbers::pi;
}

double bump(double alpha) {
    constexpr double lo = 1.0 / 7.0, hi = 6.0 / 7.0;
    if (alpha <= lo || alpha >= hi) return 0.0;
    return std::exp(-1.0 / ((alpha - lo) * (hi - alpha)) + 196.0 / 25.0);
}

BandState ic_bump(int n) {
    Grid grid(n);
    std::vector<Vec2> z(n);
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) {
        const double a = grid.center(i);
        const double h = bump(a);
        z[i] = {a + 0.1 * h, 0.1 * h};
        phi[i] = 0.5 * kPi + 0.01 * h;
    }
    return BandState(std::move(z), std::move(phi));
}

BandState ic_cosine(double k, int n) {
    Grid grid(n);
    std::vector<Vec2> z(n);
    std::vector<double> phi(n, 0.5 * kPi);
    for (int i = 0; i < n; ++i) {
        const double a = grid.center(i);
        z[i] = {a, -std::cos(k * kPi * a)};
    }
    return BandState(std::move(z), std::move(phi));
}

double parse_beta_spec(const std::string& spec, double gamma) {
    if (!spec.empty() && spec.front() == 'x') {
        const auto b0pos = spec.find("b0");
        if (b0pos == std::string::npos || b0pos + 2 != spec.size())
            throw std::invalid_argument("beta spec '" + spec + "': expected x<mult>b0");
        const double mult = std::stod(spec.substr(1, b0pos - 1));
        return mult * beta0(gamma);
    }
    return std::stod(spec);
}

ScenarioConfig named_scenario(const std::string& id) {
    ScenarioConfig c;
    c.scenario = id;
    if (id == "example-1-1") {
        c.gamma = 0.75;
        c.beta_spec = "x1.01b0";
        c.ic = "bump";
    } else if (id == "example-1-2") {
        c.gamma = 0.75;
        c.beta_spec = "x0.99b0";
        c.ic = "bump";
    } else if (id == "example-1-3") {
        c.gamma = 0.25;
        c.beta_spec = "x0.99b0";
        c.ic = "bump";
    } else if (id == "example-2a") {
        c.gamma = 0.25;
        c.beta_spec = "x1.01b0";
        c.ic = "cosine:1.134";
    } else if (id == "example-2b") {
        c.gamma = 0.25;
        c.beta_spec = "x1.01b0";
        c.ic = "cosine:1.135";
    } else if (id == "custom") {
        // caller fills everything in
    } else {
        throw std::invalid_argument("unknown scenario '" + id + "'");
    }
    return c;
}

namespace {

BandState make_ic(const ScenarioConfig& cfg) {
    if (!cfg.seed_file.empty()) return read_state_csv(cfg.seed_file);
    if (cfg.ic == "bump") return ic_bump(cfg.n);
    if (cfg.ic == "trivial") return trivial_state(0.5 * kPi, cfg.n);
    if (cfg.ic.rfind("cosine:", 0) == 0)
        return ic_cosine(std::stod(cfg.ic.substr(7)), cfg.n);
    // anything else is a state CSV path
    return read_state_csv(cfg.ic);
}

// First crossing of 99% of the terminal center-of-mass vertical displacement,
// interpolated linearly between samples.
std::pair<double, double> settle_99(const Trajectory& traj) {
    const int n = traj.states.front().n();
    std::vector<double> Y(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        double y = 0.0;
        for (const Vec2& z : traj.states[k].z) y += z.y;
        Y[k] = y / n;
    }
    const double y0 = Y.front();
    const double yinf = Y.back() - y0;
    const double target = 0.99 * yinf;
    for (std::size_t k = 1; k < Y.size(); ++k) {
        const double a = Y[k - 1] - y0, b = Y[k] - y0;
        const bool crossed = yinf >= 0.0 ? (a < target && b >= target)
                                         : (a > target && b <= target);
        if (crossed) {
            const double w = (target - a) / (b - a);
            return {traj.times[k - 1] + w * (traj.times[k] - traj.times[k - 1]), yinf};
        }
    }
    return {traj.times.back(), yinf};
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const auto tic = std::chrono::steady_clock::now();
    ScenarioResult res;
    res.config = cfg;

    const ModelParams params(cfg.beta(), cfg.gamma);
    const BandState state0 = make_ic(cfg);

    IntegratorConfig icfg;
    icfg.abs_tol = cfg.abs_tol;
    icfg.rel_tol = cfg.rel_tol;
    icfg.t0 = 0.0;
    icfg.tf = cfg.t_final;
    icfg.max_step = cfg.max_step;
    for (double ts : cfg.snapshot_times)
        if (ts < cfg.t_final) icfg.sample_times.push_back(ts);
    // Regular samples for settling plus a dense classification window; the
    // window caps the step so oscillations stay temporally resolved.
    const double wstart = std::max(0.0, cfg.t_final - cfg.classify_window);
    for (double t = cfg.sample_dt; t < wstart; t += cfg.sample_dt)
        icfg.sample_times.push_back(t);
    const double class_dt = std::min(cfg.sample_dt, 0.25);
    for (double t = wstart; t <= cfg.t_final + 1e-9; t += class_dt)
        icfg.sample_times.push_back(std::min(t, cfg.t_final));
    std::sort(icfg.sample_times.begin(), icfg.sample_times.end());
    icfg.sample_times.erase(
        std::unique(icfg.sample_times.begin(), icfg.sample_times.end()),
        icfg.sample_times.end());
    if (!cfg.max_step) icfg.max_step = 1.0;

    try {
        res.trajectory = integrate(state0, params, icfg);
        res.motion = classify_motion(res.trajectory, params, wstart, cfg.t_final,
                                     cfg.classify);
        const auto [t99, disp] = settle_99(res.trajectory);
        res.settle_time_99 = t99;
        res.terminal_displacement = disp;

        const BandState& terminal = res.trajectory.states.back();
        const RhsEval r = rhs(terminal, params);
        Vec2 v{0, 0};
        for (const Vec2& dz : r.dz_dt) v += dz;
        res.terminal_velocity = v / terminal.n();

        if (res.motion.cls == MotionClass::Traveling) {
            // Re-solve from the terminal state; a genuine traveling wave
            // converges right back with nearly the observed velocity.
            BandState seed = terminal;
            Vec2 zbar{0, 0};
            for (const Vec2& z : seed.z) zbar += z;
            zbar = zbar / seed.n();
            for (Vec2& z : seed.z) z -= zbar;
            NewtonOptions nopts;
            nopts.tag_stability = false;
            const TravelingWave wave =
                newton_solve(seed, res.terminal_velocity, params, nopts);
            res.steady_residual_norm = wave.residual_norm;
            res.steady_velocity_mismatch = norm(wave.velocity - res.terminal_velocity) /
                                           std::max(norm(res.terminal_velocity), 1e-300);
        }
    } catch (const std::exception& err) {
        res.status = err.what();
    }

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        if (!res.trajectory.times.empty()) {
            write_trajectory_csv(cfg.out_dir + "/trajectory.csv", res.trajectory);
            for (double ts : cfg.snapshot_times) {
                if (ts > res.trajectory.times.back()) continue;
                const auto it = std::lower_bound(res.trajectory.times.begin(),
                                                 res.trajectory.times.end(), ts - 1e-12);
                const std::size_t k = it - res.trajectory.times.begin();
                char name[64];
                std::snprintf(name, sizeof name, "/snapshot_t%g.csv", ts);
                write_state_csv(cfg.out_dir + name, res.trajectory.states[k]);
            }
        }
        write_summary_json(cfg.out_dir + "/summary.json", res);
    }
    return res;
}

SweepResult sweep_beta(const SweepConfig& cfg) {
    SweepResult out;
    if (!(cfg.beta_step > 0.0) || !(cfg.beta_hi >= cfg.beta_lo))
        throw std::invalid_argument("sweep_beta: bad range");

    if (cfg.sampling == SweepSampling::Continuation) {
        // Seed a wave at the stable end and walk the branch across the range.
        const ModelParams params(cfg.beta_hi, cfg.gamma);
        TravelingWave seed = newton_solve(trivial_state(0.5 * kPi, cfg.n), {0, 0}, params);
        ContinuationOptions copt;
        copt.initial_dbeta = -cfg.beta_step;
        copt.max_dbeta = cfg.beta_step;
        const Branch branch = continue_branch(seed, params, cfg.beta_lo, cfg.beta_hi, copt);
        for (const TravelingWave& w : branch.points) {
            const double v = norm(w.velocity);
            for (int i = 0; i < cfg.n; ++i)
                out.rows.push_back({w.beta, i, v, v, w.stable ? "stable" : "unstable"});
        }
        return out;
    }

    const int count = static_cast<int>((cfg.beta_hi - cfg.beta_lo) / cfg.beta_step + 1.5);
    for (int k = 0; k < count; ++k) {
        const double beta = cfg.beta_lo + k * cfg.beta_step;
        if (beta > cfg.beta_hi + 1e-12) break;
        try {
            const ModelParams params(beta, cfg.gamma);
            BandState state0 = cfg.ic == "bump" ? ic_bump(cfg.n)
                               : cfg.ic.rfind("cosine:", 0) == 0
                                   ? ic_cosine(std::stod(cfg.ic.substr(7)), cfg.n)
                                   : read_state_csv(cfg.ic);
            IntegratorConfig icfg;
            icfg.abs_tol = cfg.abs_tol;
            icfg.rel_tol = cfg.rel_tol;
            icfg.tf = cfg.t_final;
            icfg.max_step = 1.0;
            const double wstart = cfg.t_final - cfg.window;
            for (double t = wstart; t <= cfg.t_final + 1e-9; t += 0.25)
                icfg.sample_times.push_back(std::min(t, cfg.t_final));
            const Trajectory traj = integrate(state0, params, icfg);

            const MotionReport rep =
                classify_motion(traj, params, wstart, cfg.t_final, cfg.classify);
            const int n = traj.states.front().n();
            std::vector<double> nmin(n, std::numeric_limits<double>::infinity());
            std::vector<double> nmax(n, 0.0);
            for (std::size_t s = 0; s < traj.times.size(); ++s) {
                if (traj.times[s] < wstart) continue;
                const RhsEval r = rhs(traj.states[s], params);
                for (int i = 0; i < n; ++i) {
                    const double sp = norm(r.dz_dt[i]);
                    nmin[i] = std::min(nmin[i], sp);
                    nmax[i] = std::max(nmax[i], sp);
                }
            }
            for (int i = 0; i < n; ++i)
                out.rows.push_back({beta, i, nmin[i], nmax[i], to_string(rep.cls)});
        } catch (const std::exception& err) {
            out.errors.push_back("beta=" + std::to_string(beta) + ": " + err.what());
        }
    }
    return out;
}

} // namespace filband
