#include "filband/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "filband/steady.hpp"

namespace filband {

namespace {

std::string full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    const int n = traj.states.empty() ? 0 : traj.states.front().n();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",z" << i << "x,z" << i << "y";
    for (int i = 1; i <= n; ++i) out << ",phi" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << full(traj.times[k]);
        for (const Vec2& z : traj.states[k].z) out << "," << full(z.x) << "," << full(z.y);
        for (double p : traj.states[k].phi) out << "," << full(p);
        out << "\n";
    }
}

void write_state_csv(const std::string& path, const BandState& state) {
    auto out = open_out(path);
    out << "alpha,zx,zy,phi\n";
    Grid grid(state.n());
    for (int i = 0; i < state.n(); ++i)
        out << full(grid.center(i)) << "," << full(state.z[i].x) << ","
            << full(state.z[i].y) << "," << full(state.phi[i]) << "\n";
}

BandState read_state_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<Vec2> z;
    std::vector<double> phi;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error(path + ": short row '" + line + "'");
            vals[c] = std::stod(cell);
        }
        z.push_back({vals[1], vals[2]});
        phi.push_back(vals[3]);
    }
    return BandState(std::move(z), std::move(phi));
}

void write_branch_csv(const std::string& path, const Branch& branch) {
    auto out = open_out(path);
    out << "beta,Vx,Vy,amplitude,stable,residual\n";
    for (const TravelingWave& w : branch.points) {
        out << full(w.beta) << "," << full(w.velocity.x) << "," << full(w.velocity.y)
            << "," << full(phi_amplitude(w.state)) << "," << (w.stable ? 1 : 0) << ","
            << full(w.residual_norm) << "\n";
    }
}

void write_summary_json(const std::string& path, const ScenarioResult& res) {
    nlohmann::json j;
    j["scenario"] = res.config.scenario;
    j["status"] = res.status;
    j["params"] = {{"gamma", res.config.gamma},
                   {"beta", res.config.beta()},
                   {"beta_spec", res.config.beta_spec},
                   {"n", res.config.n},
                   {"t_final", res.config.t_final},
                   {"abs_tol", res.config.abs_tol},
                   {"rel_tol", res.config.rel_tol},
                   {"ic", res.config.ic}};
    j["terminal_class"] = to_string(res.motion.cls);
    j["velocity"] = {res.terminal_velocity.x, res.terminal_velocity.y};
    j["diagnostics"] = {{"mean_speed", res.motion.diag.mean_speed},
                        {"speed_spread", res.motion.diag.speed_spread},
                        {"rotation_rate", res.motion.diag.rotation_rate},
                        {"com_displacement", res.motion.diag.com_displacement},
                        {"direction_deg", res.motion.diag.direction_deg},
                        {"autocorr_peak", res.motion.diag.autocorr_peak}};
    if (res.motion.diag.period) j["diagnostics"]["period"] = *res.motion.diag.period;
    j["settle_time_99"] = res.settle_time_99;
    j["terminal_displacement"] = res.terminal_displacement;
    if (res.steady_residual_norm >= 0.0) {
        j["steady_check"] = {{"residual", res.steady_residual_norm},
                             {"velocity_mismatch", res.steady_velocity_mismatch}};
    }
    j["wall_seconds"] = res.wall_seconds;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    auto out = open_out(path);
    out << "beta,node,vmin,vmax,class\n";
    for (const SweepRow& r : sweep.rows)
        out << full(r.beta) << "," << r.node << "," << full(r.vmin) << ","
            << full(r.vmax) << "," << r.cls << "\n";
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

} // namespace filband
