#include "halfflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace halfflow {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MetricDegenerated: return "MetricDegenerated";
    case Termination::EnergyConcentrated: return "EnergyConcentrated";
    case Termination::TimeLimit: return "TimeLimit";
  }
  return "?";
}

void FlowConfig::validate() const {
  if (!target && !freeze_map)
    throw std::invalid_argument("FlowConfig: target not set");
  if (modes < 1) throw std::invalid_argument("FlowConfig: modes must be >= 1");
  if (!(dt_cfl > 0.0)) throw std::invalid_argument("FlowConfig: dt_cfl must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("FlowConfig: epsilon must be in [0, 1/2]");
  if (!(t_max > 0.0)) throw std::invalid_argument("FlowConfig: t_max must be positive");
  if (!(inj_min > 0.0)) throw std::invalid_argument("FlowConfig: inj_min must be positive");
  if (!(r_conc > 0.0)) throw std::invalid_argument("FlowConfig: r_conc must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("FlowConfig: tolerance must be positive");
  if (cadence < 1) throw std::invalid_argument("FlowConfig: cadence must be >= 1");
  if (stall_window < 1) throw std::invalid_argument("FlowConfig: stall_window must be >= 1");
}

namespace {

// sup over grid points of dist(u(theta_m), N).
double grid_drift(const BoundaryField& u, const TargetManifold& target) {
  const auto grid = synthesize(u);
  const int n = u.ambient_dim, M = u.grid_size;
  std::vector<double> p(static_cast<size_t>(n));
  double worst = 0.0;
  for (const auto& circle : grid)
    for (int m = 0; m < M; ++m) {
      for (int c = 0; c < n; ++c)
        p[static_cast<size_t>(c)] = circle[static_cast<size_t>(c) * M + m];
      worst = std::max(worst, target.distance(p));
    }
  return worst;
}

BoundaryField reproject(const BoundaryField& u, const TargetManifold& target) {
  auto grid = synthesize(u);
  const int n = u.ambient_dim, M = u.grid_size;
  std::vector<double> p(static_cast<size_t>(n)), out(p.size());
  for (auto& circle : grid)
    for (int m = 0; m < M; ++m) {
      for (int c = 0; c < n; ++c)
        p[static_cast<size_t>(c)] = circle[static_cast<size_t>(c) * M + m];
      target.nearest_point(p, out);
      for (int c = 0; c < n; ++c)
        circle[static_cast<size_t>(c) * M + m] = out[static_cast<size_t>(c)];
    }
  return analyze(grid, n, u.max_mode);
}

FlowState advance(const FlowState& base, double factor, const BoundaryField& du,
                  double da) {
  FlowState s = base;
  s.u.axpy(factor, du);
  if (s.domain.kind == DomainKind::Cylinder) {
    const double a = s.domain.cylinder_metric().a + factor * da;
    if (!(a > 0.0)) throw FlowError("step: metric parameter left (0, inf)");
    s.domain = DomainSpec::cylinder(a);
  }
  return s;
}

}  // namespace

BoundaryField map_velocity(const BoundaryField& u, const DomainSpec& domain,
                           const TargetManifold& target) {
  BoundaryField v = projected_neumann(u, domain, target);
  v.scale(-1.0);
  return v;
}

BoundaryField map_velocity_eps(const BoundaryField& u, const DomainSpec& domain,
                               const TargetManifold& target, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("map_velocity_eps: epsilon must be in [0, 1/2]");
  BoundaryField v = map_velocity(u, domain, target);
  if (epsilon > 0.0) v.axpy(-epsilon, dtn(u, domain));
  return v;
}

FlowVelocity flow_velocity(const FlowState& state, const FlowConfig& config) {
  FlowVelocity v;
  const BoundaryField neumann = dtn(state.u, state.domain);
  v.dtn_norm = boundary_norm(neumann, state.domain);

  if (config.freeze_map) {
    v.du = BoundaryField::zeros(state.u.num_circles, state.u.ambient_dim,
                                state.u.max_mode, state.u.grid_size);
  } else {
    const auto samples =
        projected_neumann_samples(state.u, state.domain, *config.target);
    v.map_residual =
        boundary_samples_norm(samples, state.u.ambient_dim, state.domain);
    v.du = analyze(samples, state.u.ambient_dim, state.u.max_mode);
    v.du.scale(-1.0);
    if (config.epsilon > 0.0) v.du.axpy(-config.epsilon, neumann);
  }

  if (state.domain.kind == DomainKind::Cylinder) {
    const CylinderMetric& g = state.domain.cylinder_metric();
    v.horizontal_residual = horizontal_projection_norm(state.u, g);
    v.da = config.freeze_metric ? 0.0 : metric_velocity(state.u, g);
  }
  return v;
}

double stable_dt(const FlowState& state, const FlowConfig& config) {
  const int K = std::max(1, state.u.max_mode);
  if (state.domain.kind == DomainKind::Disc) return config.dt_cfl / K;
  const double a = state.domain.cylinder_metric().a;
  return config.dt_cfl * std::sqrt(a) / (2.0 * M_PI * K);
}

StepResult step(const FlowState& state, double dt, const FlowConfig& config) {
  return step(state, dt, config, flow_velocity(state, config));
}

StepResult step(const FlowState& state, double dt, const FlowConfig& config,
                const FlowVelocity& stage1) {
  if (!(dt >= 0.0)) throw std::invalid_argument("step: dt must be >= 0");
  if (dt == 0.0) return StepResult{state, 0.0, 0.0, 0, half_energy(state.u, state.domain)};

  const double energy_before = half_energy(state.u, state.domain);
  const double drift_tol =
      config.drift_tolerance > 0.0
          ? config.drift_tolerance
          : (config.target ? config.target->tubular_radius() / 4.0 : 1.0);

  std::string last_reason;
  for (int halvings = 0; halvings <= 10; ++halvings, dt *= 0.5) {
    try {
      const FlowVelocity k1 = stage1;
      const FlowVelocity k2 =
          flow_velocity(advance(state, 0.5 * dt, k1.du, k1.da), config);
      const FlowVelocity k3 =
          flow_velocity(advance(state, 0.5 * dt, k2.du, k2.da), config);
      const FlowVelocity k4 = flow_velocity(advance(state, dt, k3.du, k3.da), config);

      BoundaryField du = k1.du;
      du.axpy(2.0, k2.du);
      du.axpy(2.0, k3.du);
      du.axpy(1.0, k4.du);
      const double da = k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da;

      FlowState next = advance(state, dt / 6.0, du, da);
      next.t = state.t + dt;
      next.u.enforce_real();

      StepResult result;
      result.dt_used = dt;
      result.halvings = halvings;
      if (config.freeze_map) {
        result.drift = 0.0;
        result.state = std::move(next);
      } else {
        result.drift = grid_drift(next.u, *config.target);
        if (result.drift > drift_tol) {
          last_reason = "reprojection drift above tolerance";
          continue;
        }
        next.u = reproject(next.u, *config.target);
        result.state = std::move(next);
      }
      result.energy = half_energy(result.state.u, result.state.domain);
      if (result.energy > energy_before + 1e-10 * energy_before) {
        last_reason = "energy increased beyond tolerance";
        continue;
      }
      return result;
    } catch (const TargetError& e) {
      // A stage left the tube; a smaller step keeps the stages near N.
      last_reason = e.what();
      continue;
    }
  }
  throw StepRejected("step: dt floor reached after 10 halvings (" + last_reason + ")");
}

namespace {

StepSample make_sample(const FlowState& state, const FlowVelocity& v, double energy,
                       const FlowConfig& config) {
  StepSample s;
  s.t = state.t;
  s.energy = energy;
  s.map_residual = v.map_residual;
  s.horizontal_residual = v.horizontal_residual;
  s.dtn_norm = v.dtn_norm;
  if (state.domain.kind == DomainKind::Cylinder) {
    s.a = state.domain.cylinder_metric().a;
    s.inj = state.domain.cylinder_metric().injectivity_radius();
  }
  if (const auto* pair =
          dynamic_cast<const CirclePairTarget*>(config.target.get())) {
    s.winding_top = winding_number(state.u, *pair, 0);
    s.winding_bottom =
        state.u.num_circles > 1 ? winding_number(state.u, *pair, 1) : 0;
  }
  return s;
}

double scan_radius(const FlowState& state, const FlowConfig& config) {
  double r = config.r_conc;
  if (state.domain.kind == DomainKind::Cylinder)
    r = std::min(r, 0.999 * state.domain.cylinder_metric().injectivity_radius());
  else
    r = std::min(r, 0.999);
  return r;
}

}  // namespace

RunResult run(const FlowConfig& config, const FlowState& initial) {
  config.validate();

  RunRecord record;
  record.epsilon = config.epsilon;
  record.initial_energy = half_energy(initial.u, initial.domain);
  const double delta_conc = config.delta_conc > 0.0
                                ? config.delta_conc
                                : 0.1 * record.initial_energy;

  FlowState state = initial;
  double energy = record.initial_energy;
  double pending_drift = 0.0;

  while (true) {
    const FlowVelocity v = flow_velocity(state, config);
    StepSample sample = make_sample(state, v, energy, config);
    sample.drift = pending_drift;
    record.steps.push_back(sample);
    const size_t idx = record.steps.size() - 1;

    const bool cadence_hit = idx % static_cast<size_t>(config.cadence) == 0;

    // Termination tests, most specific first.
    Termination reason{};
    bool done = false;

    if (state.domain.kind == DomainKind::Cylinder &&
        state.domain.cylinder_metric().injectivity_radius() < config.inj_min) {
      reason = Termination::MetricDegenerated;
      done = true;
    }

    if (!done && v.map_residual <= config.tolerance &&
        v.horizontal_residual <= config.tolerance && !config.freeze_map) {
      reason = Termination::Converged;
      done = true;
    }

    if (!done && state.t >= config.t_max * (1.0 - 1e-12)) {
      reason = Termination::TimeLimit;
      done = true;
    }

    if (cadence_hit || done) {
      const double r = scan_radius(state, config);
      const LocalEnergyScan scan = local_energy_scan(state.u, state.domain, r);
      record.scans.push_back(
          ScanSample{idx, state.t, scan.value, scan.circle, scan.theta});

      if (!done && scan.value > delta_conc &&
          record.scans.size() > static_cast<size_t>(config.stall_window)) {
        const auto& past =
            record.scans[record.scans.size() - 1 - config.stall_window];
        const double res_past = record.steps[past.step_index].map_residual;
        const bool stalled = v.map_residual >= 0.99 * res_past;
        if (stalled) {
          reason = Termination::EnergyConcentrated;
          done = true;
          ConcentrationReport rep;
          rep.t = state.t;
          rep.circle = scan.circle;
          rep.theta = scan.theta;
          rep.energy_r = scan.value;
          rep.energy_r_half =
              local_energy_scan(state.u, state.domain, r / 2.0).value;
          rep.energy_r_quarter =
              local_energy_scan(state.u, state.domain, r / 4.0).value;
          rep.bubble_floor = config.bubble_floor;
          rep.above_floor = scan.value >= config.bubble_floor;
          record.concentration = rep;
        }
      }
    }

    if (done) {
      record.termination = reason;
      return RunResult{std::move(state), std::move(record)};
    }

    double dt = std::min(stable_dt(state, config), config.t_max - state.t);
    StepResult sr = step(state, dt, config, v);
    record.steps.back().dt = sr.dt_used;
    pending_drift = sr.drift;
    record.cumulative_drift += sr.drift;
    record.max_step_drift = std::max(record.max_step_drift, sr.drift);
    if (config.target &&
        record.cumulative_drift > config.target->tubular_radius() / 2.0)
      throw FlowError("run: cumulative reprojection drift exceeded eta/2");
    state = std::move(sr.state);
    energy = sr.energy;
  }
}

DecayReport energy_decay_check(const RunRecord& record) {
  DecayReport rep;
  const double eps = record.epsilon;
  auto model_rate = [&](const StepSample& s) {
    return -(eps * s.dtn_norm * s.dtn_norm + s.map_residual * s.map_residual +
             0.25 * s.horizontal_residual * s.horizontal_residual);
  };
  for (size_t i = 0; i + 1 < record.steps.size(); ++i) {
    const StepSample& s0 = record.steps[i];
    const StepSample& s1 = record.steps[i + 1];
    if (!(s0.dt > 0.0)) continue;
    const double measured = (s1.energy - s0.energy) / s0.dt;
    const double r0 = model_rate(s0), r1 = model_rate(s1);
    const double avg = 0.5 * (r0 + r1);
    const double tol = 1e-3 * std::abs(avg) + std::abs(r1 - r0) +
                       1e-9 * record.initial_energy;
    const double ratio = std::abs(measured - avg) / tol;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_step = i;
      rep.worst_measured = measured;
      rep.worst_model = avg;
    }
  }
  return rep;
}

}  // namespace halfflow
