#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mech/noether.hpp"
#include "mech/state.hpp"

namespace mech {

// shortest decimal representation that round-trips the exact double
std::string format_double(double x);

// one verification-matrix entry
struct CheckResult {
  std::string check;
  std::string ref;  // short machine-readable tag for the certified property
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

// header: t,x1..xn,(v1..vn|xi1..xin),E,<charge names...>
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::function<double(int)>& energy_at,
                          const std::vector<std::string>& charge_names,
                          const std::function<double(int, int)>& charge_at);

// sidecar {"method": ..., "dt": ..., "t_end": ...}
void write_trajectory_sidecar(const std::string& path, const Trajectory& traj);

void write_reports_json(const std::string& path, const std::vector<ConservationReport>& reports);

void write_verification_json(const std::string& path, const std::vector<CheckResult>& checks);

}  // namespace mech
