#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "halfflow/diagnostics.hpp"

namespace halfflow {

struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Energy still increases (or the state leaves the tube) after exhausting
// the dt halvings.
struct StepRejected : FlowError {
  using FlowError::FlowError;
};

struct FlowState {
  BoundaryField u;
  DomainSpec domain;
  double t = 0.0;
};

enum class Termination { Converged, MetricDegenerated, EnergyConcentrated, TimeLimit };

const char* to_string(Termination t);

struct FlowConfig {
  DomainKind domain_kind = DomainKind::Disc;
  std::shared_ptr<const TargetManifold> target;
  int modes = 64;       // K; physical grid is 4K
  double dt_cfl = 0.5;  // dt = dt_cfl * sqrt(a) / (2 pi K), disc: dt_cfl / K
  double epsilon = 0.0;
  double t_max = 10.0;
  double inj_min = 1e-2;
  double r_conc = 0.1;
  double delta_conc = -1.0;       // <= 0: resolved to 0.1 * E(0) at run start
  double tolerance = 1e-6;
  double drift_tolerance = -1.0;  // <= 0: resolved to eta/4 at run start
  int cadence = 10;               // steps between scan samples / output rows
  int stall_window = 10;          // cadence samples for the stall test
  double bubble_floor = 1e-3;
  std::uint64_t seed = 0;

  // Test-harness switches, not part of the config file schema.
  bool freeze_map = false;
  bool freeze_metric = false;

  void validate() const;
};

// Right-hand side of the coupled system at one state, plus the norms the
// run record needs (all evaluated at the input state).
struct FlowVelocity {
  BoundaryField du;
  double da = 0.0;
  double map_residual = 0.0;         // ||P_u dtn u||_{L2(ds_g)}
  double dtn_norm = 0.0;             // ||dtn u||_{L2(ds_g)}
  double horizontal_residual = 0.0;  // ||P^H k||_{L2}
};

// du/dt = -P_u(dtn u), pseudo-spectral with pointwise projection on the
// oversampled grid.
BoundaryField map_velocity(const BoundaryField& u, const DomainSpec& domain,
                           const TargetManifold& target);

// Regularized variant du/dt = -(eps + P_u)(dtn u).
BoundaryField map_velocity_eps(const BoundaryField& u, const DomainSpec& domain,
                               const TargetManifold& target, double epsilon);

FlowVelocity flow_velocity(const FlowState& state, const FlowConfig& config);

struct StepResult {
  FlowState state;
  double dt_used = 0.0;
  double drift = 0.0;  // sup-norm distance to N before reprojection
  int halvings = 0;
  double energy = 0.0;
};

// One explicit RK4 step of the coupled system followed by pointwise
// reprojection onto N. Rejects (halving dt, up to 10 times) when the
// energy increases beyond 1e-10 * E or the state leaves the tube.
StepResult step(const FlowState& state, double dt, const FlowConfig& config);
// Variant reusing a precomputed stage-1 velocity.
StepResult step(const FlowState& state, double dt, const FlowConfig& config,
                const FlowVelocity& stage1);

struct StepSample {
  double t = 0.0;
  double energy = 0.0;
  double map_residual = 0.0;
  double horizontal_residual = 0.0;
  double dtn_norm = 0.0;
  double a = 0.0;    // 0 on the disc
  double inj = 0.0;  // 0 on the disc
  double dt = 0.0;   // dt of the step leaving this sample (0 for the last)
  double drift = 0.0;
  int winding_top = 0;
  int winding_bottom = 0;
};

struct ScanSample {
  size_t step_index = 0;
  double t = 0.0;
  double sup_local_energy = 0.0;
  int argmax_circle = 0;
  double argmax_theta = 0.0;
};

struct ConcentrationReport {
  double t = 0.0;
  int circle = 0;
  double theta = 0.0;
  // Local energy at the three dyadic radii r, r/2, r/4.
  double energy_r = 0.0, energy_r_half = 0.0, energy_r_quarter = 0.0;
  double bubble_floor = 0.0;
  bool above_floor = false;
};

struct RunRecord {
  std::vector<StepSample> steps;  // one per accepted step, plus the initial state
  std::vector<ScanSample> scans;  // every `cadence` steps and the final state
  Termination termination = Termination::TimeLimit;
  std::optional<ConcentrationReport> concentration;
  double initial_energy = 0.0;
  double epsilon = 0.0;
  double cumulative_drift = 0.0;
  double max_step_drift = 0.0;
};

struct RunResult {
  FlowState state;
  RunRecord record;
};

// Integrates until t_max, convergence (all residuals below tolerance),
// metric degeneration (inj < inj_min) or energy concentration (windowed
// local energy above delta_conc while the residuals stall).
RunResult run(const FlowConfig& config, const FlowState& initial);

// Per-step check of the energy-decay identity
//   dE/dt = -eps ||dtn u||^2 - ||P_u dtn u||^2 - (1/4) ||P^H k||^2
// against the recorded rates, with tolerance
//   1e-3 |rate| + |rate_{n+1} - rate_n| + 1e-9 E(0).
struct DecayReport {
  double max_ratio = 0.0;  // max over steps of violation / tolerance; <= 1 passes
  size_t worst_step = 0;
  double worst_measured = 0.0;
  double worst_model = 0.0;
};

DecayReport energy_decay_check(const RunRecord& record);

// CFL step size from the DtN spectral radius at the current state.
double stable_dt(const FlowState& state, const FlowConfig& config);

}  // namespace halfflow
