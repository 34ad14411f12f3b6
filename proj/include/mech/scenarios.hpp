#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mech/io.hpp"

namespace mech {

struct RunConfig {
  std::string scenario;
  double dt = 0.0;     // 0 -> scenario default
  double t_end = 0.0;  // 0 -> scenario default
  std::string method;  // empty -> implicit_midpoint
  std::uint64_t seed = 42;
  std::string out_dir;  // empty -> runs/<scenario>
  std::map<std::string, double> params;  // m, l, g, k overrides
  bool write_files = true;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();

struct RunSummary {
  std::vector<CheckResult> checks;
  std::vector<ConservationReport> reports;
  std::vector<std::string> files_written;

  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Builds the named scenario, integrates it in both pictures, evaluates its
// verification matrix, and (unless write_files is off) writes trajectory
// CSV + sidecar, charge reports, and the verification matrix.
RunSummary run_scenario(const RunConfig& config);

// named charges usable on any system
Charge energy_charge(const LagrangianSystem& L);
Charge hamiltonian_charge(const HamiltonianSystem& H);

}  // namespace mech
