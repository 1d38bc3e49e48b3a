#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "halfflow/flow.hpp"

namespace halfflow {

inline constexpr const char* kVersion = "halfflow 0.1.0";

struct ConfigError : std::runtime_error {
  std::string key;  // offending key, when one is known
  explicit ConfigError(const std::string& msg, std::string key_ = {})
      : std::runtime_error(msg), key(std::move(key_)) {}
};

// Flat key-value config with [section] headers; keys are addressed as
// "section.key" ("seed" and other pre-section keys stay unqualified).
struct Config {
  std::map<std::string, std::string> values;

  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key) const;

  // Sorted key=value lines; the hash is therefore independent of key order.
  std::string canonical() const;
  std::uint64_t hash() const;
};

std::uint64_t fnv1a64(std::string_view data);

// A fully resolved run: dynamics config plus the initial state and the
// output policy.
struct RunSetup {
  FlowConfig flow;
  FlowState initial;
  std::filesystem::path output_dir;
  int snapshot_cadence = 10;  // scan rows between snapshots
  std::uint64_t config_hash = 0;
};

RunSetup build_run_setup(const Config& cfg);

// Initial boundary data for a target/domain pair: the equator map into a
// sphere, the straight cylinder map into a circle pair; band-limited
// noise (coefficient scale = amplitude * target scale, modes 1..nmodes)
// is added then reprojected pointwise onto N.
BoundaryField initial_boundary_data(const DomainSpec& domain,
                                    const TargetManifold& target, int max_mode,
                                    double noise_amplitude, int noise_modes,
                                    std::uint64_t seed);

// File outputs. All numeric formatting is round-trip decimal (%.17g).
void write_series_csv(const std::filesystem::path& path, const RunRecord& record);
void write_snapshot(const std::filesystem::path& path, const FlowState& state);
FlowState read_snapshot(const std::filesystem::path& path, const DomainSpec& domain_hint);

struct ManifestInfo {
  std::uint64_t config_hash = 0;
  std::string started_at, finished_at;
  std::string termination;
  std::vector<std::filesystem::path> artifacts;  // relative to the run dir
};

void write_manifest(const std::filesystem::path& dir, const ManifestInfo& info);

// Revalidates a run directory against its manifest (files present and
// hash-matched); returns an empty string on success, else the problem.
std::string validate_manifest(const std::filesystem::path& dir);

int termination_exit_code(Termination t);

}  // namespace halfflow
