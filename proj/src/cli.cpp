#include "mech/cli.hpp"

#include <iostream>
#include <vector>

#include "CLI11.hpp"

#include "mech/scenarios.hpp"

namespace mech {

namespace {

void print_summary(const RunSummary& summary) {
  for (const CheckResult& c : summary.checks) {
    std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.check
              << "  value=" << format_double(c.value) << "  tol=" << format_double(c.tolerance)
              << "\n";
  }
  int failed = 0;
  for (const CheckResult& c : summary.checks)
    if (!c.pass) ++failed;
  std::cout << summary.checks.size() - failed << "/" << summary.checks.size()
            << " checks passed\n";
  for (const std::string& f : summary.files_written) std::cout << "wrote " << f << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"mech: chart-level Lagrangian/Hamiltonian mechanics toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  double opt_m = -1.0, opt_l = -1.0, opt_g = -1.0, opt_k = -1.0;

  // shared options live on the app so a flat config file serves both
  // subcommands; fallthrough lets them appear after the subcommand name
  app.add_option("--dt", config.dt, "time step");
  app.add_option("--t-end", config.t_end, "final time");
  app.add_option("--method", config.method,
                 "integration method: rk4 | implicit_midpoint | leapfrog");
  app.add_option("--seed", config.seed, "seed for sampled checks");
  app.add_option("--out", config.out_dir, "output directory (run only)");
  app.add_option("--m", opt_m, "mass override");
  app.add_option("--l", opt_l, "length override");
  app.add_option("--g", opt_g, "gravity override");
  app.add_option("--k", opt_k, "force-constant override");
  app.set_config("--config", "", "TOML config file; flags override file values");

  auto* list_cmd = app.add_subcommand("list", "list available scenarios");
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write its artifacts");
  run_cmd->fallthrough();
  run_cmd->add_option("scenario", config.scenario, "scenario name")->required();
  auto* verify_cmd = app.add_subcommand("verify", "run the checks only, write nothing");
  verify_cmd->fallthrough();
  verify_cmd->add_option("scenario", config.scenario, "scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly
  }

  try {
    if (list_cmd->parsed()) {
      for (const ScenarioInfo& s : list_scenarios())
        std::cout << s.name << "  -  " << s.description << "\n";
      return 0;
    }
    if (opt_m > 0.0) config.params["m"] = opt_m;
    if (opt_l > 0.0) config.params["l"] = opt_l;
    if (opt_g > 0.0) config.params["g"] = opt_g;
    if (opt_k > 0.0) config.params["k"] = opt_k;
    config.write_files = run_cmd->parsed();
    (void)verify_cmd;

    RunSummary summary = run_scenario(config);
    print_summary(summary);
    return summary.all_pass() ? 0 : 1;
  } catch (const UnknownScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace mech
