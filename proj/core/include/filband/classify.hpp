#ifndef FILBAND_CLASSIFY_HPP
#define FILBAND_CLASSIFY_HPP

#include <optional>
#include <string>

#include "filband/integrate.hpp"
#include "filband/model.hpp"

namespace filband {

enum class MotionClass { Stationary, Traveling, Spinning, Whirling, Chaotic };

std::string to_string(MotionClass c);

// The class thresholds are calibrations, not model constants; they live here
// so sweeps can tighten or loosen them.
struct ClassifyOptions {
    double stationary_speed = 1e-4;   // max node speed
    double traveling_spread = 0.05;   // (max-min)/mean node speed
    double traveling_drift_deg = 1.0; // direction drift of the mean velocity
    double spinning_com_disp = 0.1;   // center-of-mass displacement bound
    double autocorr_peak = 0.9;       // periodicity detector
    double whirl_radius_ratio = 1.0;  // fitted radius / band length
};

struct MotionDiagnostics {
    double mean_speed = 0.0;
    double speed_spread = 0.0;   // (max - min)/mean over nodes and time
    double rotation_rate = 0.0;  // mean d(phi)/dt; sign = orientation (+ = ccw)
    std::optional<double> period;
    double com_displacement = 0.0;
    double direction_deg = 0.0;  // mean travel direction, degrees from +x
    double autocorr_peak = 0.0;
    double fit_radius = 0.0;     // circle fit of the center-of-mass path
    bool window_too_short = false;
};

struct MotionReport {
    MotionClass cls;
    MotionDiagnostics diag;
};

// Long-run motion classification over a trajectory window. The trajectory
// should sample the window densely and uniformly (a few samples per time
// unit); velocities are evaluated exactly from the RHS at each sample.
// Checks run in the order Stationary, Traveling, Spinning, Whirling, with
// Chaotic as the fallback.
MotionReport classify_motion(const Trajectory& traj, const ModelParams& params,
                             double t_begin, double t_end,
                             const ClassifyOptions& opts = {});

} // namespace filband

#endif
