#ifndef FILBAND_SCENARIOS_HPP
#define FILBAND_SCENARIOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "filband/classify.hpp"
#include "filband/integrate.hpp"
#include "filband/model.hpp"

namespace filband {

// The compactly supported bump used by the perturbed initial condition,
// h = exp(-1/((a - 1/7)(6/7 - a)) + 196/25) on (1/7, 6/7), max h = 1 at 1/2.
double bump(double alpha);

// z = (a + 0.1 h, 0.1 h), phi = pi/2 + 0.01 h, sampled at cell centers.
BandState ic_bump(int n);

// z = (a, -cos(k pi a)), phi = pi/2: only the vertical displacement is
// perturbed. k = 1.134 and 1.135 sit on opposite sides of the bistable
// knife edge at gamma = 1/4, beta = 1.01 beta0.
BandState ic_cosine(double k, int n);

// "0.27" or "x1.01b0" (multiple of beta0(gamma)).
double parse_beta_spec(const std::string& spec, double gamma);

struct ScenarioConfig {
    std::string scenario = "custom"; // example-1-1 | ... | example-2b | custom
    double gamma = 0.75;
    std::string beta_spec = "x1.01b0";
    int n = 40;
    double t_final = 1000.0;
    double sample_dt = 0.5;
    std::string ic = "trivial"; // trivial | bump | cosine:<k> | <csv path>
    std::string out_dir;
    std::string seed_file;
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    std::optional<double> max_step;
    std::vector<double> snapshot_times = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0};
    double classify_window = 100.0;
    ClassifyOptions classify;

    double beta() const { return parse_beta_spec(beta_spec, gamma); }
};

// Fill in the (gamma, beta/beta0, IC) triple of a named scenario; fields the
// caller already set explicitly can be kept by applying overrides afterward.
ScenarioConfig named_scenario(const std::string& id);

struct ScenarioResult {
    ScenarioConfig config;
    std::string status = "ok"; // or the failure description
    MotionReport motion{MotionClass::Chaotic, {}};
    Vec2 terminal_velocity{0, 0};
    double settle_time_99 = 0.0;      // 99% of terminal vertical displacement
    double terminal_displacement = 0.0;
    double steady_residual_norm = -1.0; // Newton re-solve from the terminal state
    double steady_velocity_mismatch = -1.0;
    double wall_seconds = 0.0;
    Trajectory trajectory;
};

// Integrate the scenario, classify the final window, measure settling, and
// (for traveling outcomes) cross-check against the steady solver. When
// out_dir is set, writes trajectory.csv, summary.json and snapshot_*.csv.
ScenarioResult run_scenario(const ScenarioConfig& config);

// One row per (beta, node) pair of a sweep; vmin/vmax are over the window.
struct SweepRow {
    double beta;
    int node;
    double vmin;
    double vmax;
    std::string cls; // motion class at this beta (uniform sampling only)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> errors; // per-beta failures; the sweep continues
};

enum class SweepSampling { Uniform, Continuation };

struct SweepConfig {
    double beta_lo;
    double beta_hi;
    double beta_step;
    SweepSampling sampling = SweepSampling::Uniform;
    double gamma = 0.25;
    int n = 40;
    std::string ic = "bump";
    double t_final = 1000.0;
    double window = 100.0; // classify/report over [t_final - window, t_final]
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    ClassifyOptions classify;
};

// Long-time dynamics across beta. Uniform sampling integrates each beta to
// t_final and reports per-node max/min speeds over the trailing window plus
// the motion class; continuation sampling delegates to the steady solver and
// reports |V| with a stability flag (vmin = vmax = |V|).
SweepResult sweep_beta(const SweepConfig& config);

} // namespace filband

#endif
