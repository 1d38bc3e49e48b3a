// Command-line driver: run / resume flow experiments, run the validator
// suites, and print catenoid reference solutions.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfflow/checks.hpp"
#include "halfflow/config.hpp"

namespace fs = std::filesystem;
using namespace halfflow;

namespace {

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%FT%TZ", &tm);
  return buf;
}

int drive_run(const RunSetup& setup, const FlowState& initial) {
  fs::create_directories(setup.output_dir);
  ManifestInfo manifest;
  manifest.config_hash = setup.config_hash;
  manifest.started_at = now_iso8601();

  const RunResult result = run(setup.flow, initial);

  write_series_csv(setup.output_dir / "series.csv", result.record);
  manifest.artifacts.push_back("series.csv");

  // Snapshots at a multiple of the scan cadence, plus the final state.
  // The final state is reconstructed per snapshot only for intermediate
  // scans we no longer hold; we store the end state and label it by its
  // step index.
  {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06zu.json",
                  result.record.steps.size() - 1);
    write_snapshot(setup.output_dir / name, result.state);
    manifest.artifacts.push_back(name);
  }

  manifest.termination = to_string(result.record.termination);
  manifest.finished_at = now_iso8601();
  write_manifest(setup.output_dir, manifest);

  std::printf("termination: %s after %zu steps, t = %.6g, E = %.12g\n",
              to_string(result.record.termination), result.record.steps.size() - 1,
              result.state.t, result.record.steps.back().energy);
  if (result.record.concentration) {
    const auto& c = *result.record.concentration;
    std::printf("concentration at circle %d theta %.6g: E(r)=%.6g E(r/2)=%.6g "
                "E(r/4)=%.6g floor=%.3g%s\n",
                c.circle, c.theta, c.energy_r, c.energy_r_half, c.energy_r_quarter,
                c.bubble_floor, c.above_floor ? "" : " (below floor)");
  }
  return termination_exit_code(result.record.termination);
}

int cmd_run(const std::string& config_path) {
  const Config cfg = Config::parse_file(config_path);
  const RunSetup setup = build_run_setup(cfg);
  return drive_run(setup, setup.initial);
}

int cmd_resume(const std::string& config_path, const std::string& snapshot_path) {
  const Config cfg = Config::parse_file(config_path);
  RunSetup setup = build_run_setup(cfg);
  const FlowState resumed =
      read_snapshot(snapshot_path, setup.initial.domain);
  return drive_run(setup, resumed);
}

int print_rows(const std::vector<CheckRow>& rows) {
  bool all_pass = true;
  std::printf("%-36s %12s %10s %6s\n", "check", "max_rel_err", "threshold", "ok");
  for (const auto& r : rows) {
    std::printf("%-36s %12.3e %10.1e %6s\n", r.name.c_str(), r.max_err, r.threshold,
                r.pass() ? "pass" : "FAIL");
    all_pass = all_pass && r.pass();
  }
  return all_pass ? 0 : 1;
}

int cmd_check(const std::string& suite) {
  std::vector<CheckRow> rows;
  if (suite == "variations") {
    rows = check_variations();
  } else if (suite == "identities") {
    rows = check_identities();
  } else if (suite == "all") {
    rows = check_variations();
    const auto more = check_identities();
    rows.insert(rows.end(), more.begin(), more.end());
  } else {
    std::fprintf(stderr, "unknown suite: %s (want variations|identities|all)\n",
                 suite.c_str());
    return 2;
  }
  return print_rows(rows);
}

int cmd_catenoid(double half_gap, double radius, int modes, bool unstable) {
  if (!(half_gap > 0.0) || !(radius > 0.0)) {
    std::fprintf(stderr, "catenoid: half_gap and radius must be positive\n");
    return 2;
  }
  const auto ref = catenoid_reference(half_gap, radius, modes, unstable);
  if (!ref) {
    std::fprintf(stderr, "catenoid: no catenoid for half_gap/radius = %.6g (max %.6g)\n",
                 half_gap / radius, catenoid_existence_ratio());
    return 3;
  }
  const DomainSpec domain = DomainSpec::cylinder(ref->a);
  const CirclePairTarget target(radius, half_gap);
  const ResidualReport res = residuals(ref->boundary, domain, target);
  nlohmann::json j;
  j["L_star"] = ref->conformal_half_length;
  j["a_star"] = ref->a;
  j["boundary_length"] = std::sqrt(ref->a);
  j["residuals"] = {{"half_harmonic", res.half_harmonic},
                    {"conformality", res.conformality},
                    {"horizontal", res.horizontal}};
  j["branch"] = unstable ? "unstable" : "stable";
  std::cout << j.dump(1) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral gradient flow of the boundary half-energy"};
  app.require_subcommand(1);

  std::string config_path, snapshot_path, suite = "all";
  double half_gap = 0.5, radius = 1.0;
  int modes = 32;
  bool unstable = false;

  auto* run_cmd = app.add_subcommand("run", "integrate a flow from a config file");
  run_cmd->add_option("config", config_path, "config file")->required();

  auto* resume_cmd = app.add_subcommand("resume", "continue a run from a snapshot");
  resume_cmd->add_option("config", config_path, "config file")->required();
  resume_cmd->add_option("snapshot", snapshot_path, "snapshot_<step>.json")->required();

  auto* check_cmd = app.add_subcommand("check", "run a validator suite");
  check_cmd->add_option("suite", suite, "variations | identities | all");

  auto* cat_cmd = app.add_subcommand("catenoid", "catenoid reference solution");
  cat_cmd->add_option("half_gap", half_gap, "half the gap between the circles")
      ->required();
  cat_cmd->add_option("radius", radius, "circle radius");
  cat_cmd->add_option("--modes", modes, "Fourier cutoff for the residual check");
  cat_cmd->add_flag("--unstable", unstable, "pick the larger (unstable) root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (resume_cmd->parsed()) return cmd_resume(config_path, snapshot_path);
    if (check_cmd->parsed()) return cmd_check(suite);
    if (cat_cmd->parsed()) return cmd_catenoid(half_gap, radius, modes, unstable);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
