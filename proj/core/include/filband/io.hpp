#ifndef FILBAND_IO_HPP
#define FILBAND_IO_HPP

#include <map>
#include <string>

#include "filband/integrate.hpp"
#include "filband/model.hpp"
#include "filband/scenarios.hpp"
#include "filband/steady.hpp"

namespace filband {

// Trajectory CSV: header "t,z1x,z1y,...,znx,zny,phi1,...,phin", one row per
// sample, full double precision.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Single-state CSV: "alpha,zx,zy,phi" rows; snapshot frames and seed files.
void write_state_csv(const std::string& path, const BandState& state);
BandState read_state_csv(const std::string& path);

// Branch CSV: "beta,Vx,Vy,amplitude,stable,residual".
void write_branch_csv(const std::string& path, const Branch& branch);

void write_summary_json(const std::string& path, const ScenarioResult& result);

void write_sweep_csv(const std::string& path, const SweepResult& sweep);

// Flat key-value config files: one "key = value" per line, keys named
// exactly like the CLI flags, '#' comments. CLI flags override these.
std::map<std::string, std::string> read_config_file(const std::string& path);

} // namespace filband

#endif
