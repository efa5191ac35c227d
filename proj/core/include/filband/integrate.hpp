#ifndef FILBAND_INTEGRATE_HPP
#define FILBAND_INTEGRATE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "filband/model.hpp"
#include "filband/semidiscrete.hpp"

namespace filband {

// Right hand side signature for the generic integrator.
using OdeFunction =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct IntegratorConfig {
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    double t0 = 0.0;
    double tf = 1.0;
    std::vector<double> sample_times; // strictly increasing, within [t0, tf]
    std::optional<double> max_step;

    void validate() const;
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long jacobians = 0;
    long rhs_evals = 0;
};

// Thrown on blow-up (density positivity failure that no step reduction can
// avoid) or step-size underflow; carries the time of failure.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what_, double t_)
        : std::runtime_error(what_ + " at t = " + std::to_string(t_)), t(t_) {}
    double t;
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    StepStats stats;
};

// Adaptive TR-BDF2 (one-step, L-stable, embedded third-order error estimate)
// with simplified Newton on a finite-difference Jacobian that is reused
// across steps. Sample states come from cubic Hermite interpolation of the
// accepted steps, so requesting samples never alters the step sequence.
// Deterministic: identical inputs give bit-identical output.
OdeSolution integrate_ode(const OdeFunction& f, const std::vector<double>& y0,
                          const IntegratorConfig& config);

struct Trajectory {
    std::vector<double> times;
    std::vector<BandState> states;
    StepStats stats;
};

// Method-of-lines integration of the filament band system.
Trajectory integrate(const BandState& state0, const ModelParams& params,
                     const IntegratorConfig& config);

} // namespace filband

#endif
