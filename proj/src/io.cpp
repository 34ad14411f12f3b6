#include "mech/io.hpp"

#include <charconv>
#include <fstream>

#include "json.hpp"

namespace mech {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::function<double(int)>& energy_at,
                          const std::vector<std::string>& charge_names,
                          const std::function<double(int, int)>& charge_at) {
  std::ofstream f = open_out(path);
  const int n = traj.n;
  const char* fibre = traj.kind == ChartKind::tangent ? "v" : "xi";
  f << "t";
  for (int i = 1; i <= n; ++i) f << ",x" << i;
  for (int i = 1; i <= n; ++i) f << "," << fibre << i;
  f << ",E";
  for (const std::string& name : charge_names) f << "," << name;
  f << "\n";
  for (int i = 0; i < traj.size(); ++i) {
    f << format_double(traj.time_at(i));
    for (int j = 0; j < 2 * n; ++j) f << "," << format_double(traj.states[i][j]);
    f << "," << format_double(energy_at(i));
    for (int c = 0; c < static_cast<int>(charge_names.size()); ++c)
      f << "," << format_double(charge_at(c, i));
    f << "\n";
  }
  if (!f) throw IoError("failed while writing '" + path + "'");
}

void write_trajectory_sidecar(const std::string& path, const Trajectory& traj) {
  nlohmann::ordered_json j;
  j["method"] = traj.method;
  j["dt"] = traj.dt;
  j["t_end"] = traj.t0 + traj.dt * (traj.size() - 1);
  std::ofstream f = open_out(path);
  f << j.dump(2) << "\n";
}

void write_reports_json(const std::string& path, const std::vector<ConservationReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ConservationReport& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["initial"] = r.initial;
    j["max_abs_drift"] = r.max_abs_drift;
    j["max_rel_drift"] = r.max_rel_drift;
    j["samples"] = r.samples;
    arr.push_back(std::move(j));
  }
  std::ofstream f = open_out(path);
  f << arr.dump(2) << "\n";
}

void write_verification_json(const std::string& path, const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json j;
    j["check"] = c.check;
    j["paper_ref"] = c.ref;
    j["status"] = c.pass ? "pass" : "fail";
    j["value"] = c.value;
    j["tolerance"] = c.tolerance;
    arr.push_back(std::move(j));
  }
  std::ofstream f = open_out(path);
  f << arr.dump(2) << "\n";
}

}  // namespace mech
