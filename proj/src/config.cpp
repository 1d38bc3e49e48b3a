#include "halfflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace halfflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto pos = line.find_first_of("#;"); pos != std::string::npos)
      line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.values[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing required key: " + key, key);
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a number: " + s, key);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("key " + key + ": not an integer", key);
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an unsigned integer: " + s, key);
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values) {  // std::map iterates sorted
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

BoundaryField initial_boundary_data(const DomainSpec& domain,
                                    const TargetManifold& target, int max_mode,
                                    double noise_amplitude, int noise_modes,
                                    std::uint64_t seed) {
  const int n = target.ambient_dim();
  BoundaryField u = BoundaryField::zeros(domain.circles(), n, max_mode);

  if (const auto* pair = dynamic_cast<const CirclePairTarget*>(&target)) {
    if (domain.kind != DomainKind::Cylinder)
      throw ConfigError("circle_pair target requires the cylinder domain");
    const double r = pair->radius(), h = pair->half_gap();
    for (int circle = 0; circle < 2; ++circle) {
      u.at(circle, 0, 1) = cplx(0.5 * r, 0.0);
      u.at(circle, 0, -1) = cplx(0.5 * r, 0.0);
      u.at(circle, 1, 1) = cplx(0.0, -0.5 * r);
      u.at(circle, 1, -1) = cplx(0.0, 0.5 * r);
      u.at(circle, 2, 0) = cplx(circle == 0 ? h : -h, 0.0);
    }
  } else if (const auto* sphere = dynamic_cast<const SphereTarget*>(&target)) {
    const double r = sphere->radius();
    for (int circle = 0; circle < domain.circles(); ++circle) {
      u.at(circle, 0, 1) = cplx(0.5 * r, 0.0);
      u.at(circle, 0, -1) = cplx(0.5 * r, 0.0);
      u.at(circle, 1, 1) = cplx(0.0, -0.5 * r);
      u.at(circle, 1, -1) = cplx(0.0, 0.5 * r);
    }
  } else {
    throw ConfigError("no initial data rule for target " + target.name());
  }

  if (noise_amplitude > 0.0 && noise_modes > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    double scale = 1.0;
    if (const auto* pair = dynamic_cast<const CirclePairTarget*>(&target))
      scale = pair->radius();
    else if (const auto* sphere = dynamic_cast<const SphereTarget*>(&target))
      scale = sphere->radius();
    const int kmax = std::min(noise_modes, max_mode);
    for (int circle = 0; circle < u.num_circles; ++circle)
      for (int comp = 0; comp < n; ++comp)
        for (int k = 1; k <= kmax; ++k) {
          const cplx dz(unit(rng), unit(rng));
          u.at(circle, comp, k) += noise_amplitude * scale * dz;
          u.at(circle, comp, -k) = std::conj(u.at(circle, comp, k));
        }
    // Return to N pointwise; small noise stays inside the tube.
    auto grid = synthesize(u);
    std::vector<double> p(static_cast<size_t>(n)), out(p.size());
    const int M = u.grid_size;
    for (auto& circle : grid)
      for (int m = 0; m < M; ++m) {
        for (int c = 0; c < n; ++c)
          p[static_cast<size_t>(c)] = circle[static_cast<size_t>(c) * M + m];
        target.nearest_point(p, out);
        for (int c = 0; c < n; ++c)
          circle[static_cast<size_t>(c) * M + m] = out[static_cast<size_t>(c)];
      }
    u = analyze(grid, n, max_mode);
  }
  return u;
}

RunSetup build_run_setup(const Config& cfg) {
  RunSetup setup;
  setup.config_hash = cfg.hash();

  const std::string domain_kind = cfg.get_string("domain.kind");
  DomainSpec domain;
  if (domain_kind == "disc") {
    domain = DomainSpec::disc();
    setup.flow.domain_kind = DomainKind::Disc;
  } else if (domain_kind == "cylinder") {
    domain = DomainSpec::cylinder(cfg.get_double("domain.a0"));
    setup.flow.domain_kind = DomainKind::Cylinder;
  } else {
    throw ConfigError("domain.kind must be disc or cylinder", "domain.kind");
  }

  const std::string target_kind = cfg.get_string("target.kind");
  const double radius = cfg.get_double("target.radius");
  std::shared_ptr<TargetManifold> target;
  if (target_kind == "sphere") {
    target = std::make_shared<SphereTarget>(radius, cfg.get_int("target.ambient_dim", 3));
  } else if (target_kind == "circle_pair") {
    target = std::make_shared<CirclePairTarget>(radius, cfg.get_double("target.half_gap"));
  } else {
    throw ConfigError("target.kind must be sphere or circle_pair", "target.kind");
  }

  FlowConfig& f = setup.flow;
  f.target = target;
  f.modes = cfg.get_int("flow.modes", 64);
  f.dt_cfl = cfg.get_double("flow.dt_cfl", 0.5);
  f.epsilon = cfg.get_double("flow.epsilon", 0.0);
  f.t_max = cfg.get_double("flow.t_max");
  f.inj_min = cfg.get_double("flow.inj_min", 1e-2);
  f.r_conc = cfg.get_double("flow.r_conc", 0.1);
  f.delta_conc = cfg.get_double("flow.delta_conc", -1.0);
  f.tolerance = cfg.get_double("flow.tolerance", 1e-6);
  f.drift_tolerance = cfg.get_double("flow.drift_tolerance", -1.0);
  f.stall_window = cfg.get_int("flow.stall_window", 10);
  f.bubble_floor = cfg.get_double("flow.bubble_floor", 1e-3);
  f.cadence = cfg.get_int("output.cadence", 10);
  f.seed = cfg.get_u64("seed");

  setup.output_dir = cfg.get_string("output.dir");
  setup.snapshot_cadence = cfg.get_int("output.snapshot_cadence", 10);

  const double noise = cfg.get_double("init.noise", 0.0);
  const int noise_modes = cfg.get_int("init.noise_modes", 8);

  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  setup.initial.domain = domain;
  setup.initial.t = 0.0;
  setup.initial.u =
      initial_boundary_data(domain, *target, f.modes, noise, noise_modes, f.seed);
  return setup;
}

void write_series_csv(const std::filesystem::path& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,energy,map_residual,horizontal_residual,a,inj,sup_local_energy,"
         "winding_top,winding_bottom,dt\n";
  for (const auto& scan : record.scans) {
    const StepSample& s = record.steps[scan.step_index];
    out << fmt17(s.t) << ',' << fmt17(s.energy) << ',' << fmt17(s.map_residual)
        << ',' << fmt17(s.horizontal_residual) << ',' << fmt17(s.a) << ','
        << fmt17(s.inj) << ',' << fmt17(scan.sup_local_energy) << ','
        << s.winding_top << ',' << s.winding_bottom << ',' << fmt17(s.dt) << '\n';
  }
}

void write_snapshot(const std::filesystem::path& path, const FlowState& state) {
  nlohmann::json j;
  j["t"] = state.t;
  j["a"] = state.domain.kind == DomainKind::Cylinder
               ? state.domain.cylinder_metric().a
               : 0.0;
  j["max_mode"] = state.u.max_mode;
  j["ambient_dim"] = state.u.ambient_dim;
  auto circles = nlohmann::json::array();
  for (int circle = 0; circle < state.u.num_circles; ++circle) {
    auto comps = nlohmann::json::array();
    for (int comp = 0; comp < state.u.ambient_dim; ++comp) {
      auto modes = nlohmann::json::array();
      for (int k = -state.u.max_mode; k <= state.u.max_mode; ++k) {
        const cplx c = state.u.at(circle, comp, k);
        modes.push_back(nlohmann::json::array({c.real(), c.imag()}));
      }
      comps.push_back(std::move(modes));
    }
    circles.push_back(std::move(comps));
  }
  j["coeffs"] = std::move(circles);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

FlowState read_snapshot(const std::filesystem::path& path,
                        const DomainSpec& domain_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  FlowState state;
  state.t = j.at("t").get<double>();
  const double a = j.at("a").get<double>();
  state.domain = a > 0.0 ? DomainSpec::cylinder(a) : domain_hint;
  const int K = j.at("max_mode").get<int>();
  const int n = j.at("ambient_dim").get<int>();
  const auto& circles = j.at("coeffs");
  state.u = BoundaryField::zeros(static_cast<int>(circles.size()), n, K);
  for (int circle = 0; circle < state.u.num_circles; ++circle)
    for (int comp = 0; comp < n; ++comp) {
      const auto& modes = circles.at(circle).at(comp);
      if (static_cast<int>(modes.size()) != 2 * K + 1)
        throw std::runtime_error("snapshot: wrong mode count");
      for (int k = -K; k <= K; ++k) {
        const auto& pair = modes.at(k + K);
        state.u.at(circle, comp, k) =
            cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
    }
  return state;
}

void write_manifest(const std::filesystem::path& dir, const ManifestInfo& info) {
  nlohmann::json j;
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(info.config_hash));
  j["config_hash"] = hash_hex;
  j["version"] = kVersion;
  j["started_at"] = info.started_at;
  j["finished_at"] = info.finished_at;
  j["termination"] = info.termination;
  auto files = nlohmann::json::array();
  for (const auto& rel : info.artifacts) {
    std::ifstream in(dir / rel, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    char fh[32];
    std::snprintf(fh, sizeof fh, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    files.push_back({{"path", rel.string()}, {"fnv1a64", fh}});
  }
  j["artifacts"] = std::move(files);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << j.dump(1) << '\n';
}

std::string validate_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return "manifest.json missing";
  nlohmann::json j;
  in >> j;
  for (const auto& entry : j.at("artifacts")) {
    const std::filesystem::path rel = entry.at("path").get<std::string>();
    std::ifstream f(dir / rel, std::ios::binary);
    if (!f) return "missing artifact: " + rel.string();
    std::stringstream ss;
    ss << f.rdbuf();
    char fh[32];
    std::snprintf(fh, sizeof fh, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    if (entry.at("fnv1a64").get<std::string>() != fh)
      return "hash mismatch: " + rel.string();
  }
  return {};
}

int termination_exit_code(Termination t) {
  switch (t) {
    case Termination::Converged: return 0;
    case Termination::MetricDegenerated: return 10;
    case Termination::EnergyConcentrated: return 11;
    case Termination::TimeLimit: return 12;
  }
  return 1;
}

}  // namespace halfflow
