#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vep/potential.hpp"
#include "vep/scenario.hpp"
#include "vep/spectral.hpp"

namespace vep {

enum class Splitting { Lie, Strang };

struct SolverConfig {
  double mu = 1.0;      // viscosity, > 0
  double eta = 0.0;     // velocity/stress coupling, >= 0
  double gamma = 0.0;   // stress diffusion, >= 0
  double dt = 1e-3;     // > 0, subject to the advective CFL bound
  double t_end = 1.0;
  double cfl_safety = 0.5;  // in (0,1]
  Splitting splitting = Splitting::Lie;
  bool dealias = true;
  ForcingSpec forcing;
};

void validate(const SolverConfig& c);

/// Explicit right-hand sides (transport, rotation, coupling, forcing):
///   dv = P(-(v.grad)v + eta Div S + f),   dS = -(v.grad)S - (S W - W S) + eta sym grad v.
/// Viscous and stress diffusion are handled exactly in diffusion_stage.
/// Throws CflViolationError when ||v||_inf dt/h > cfl_safety.
struct Tendencies {
  VectorField dv;
  TensorField dS;
};
Tendencies explicit_stage(const SpectralWorkspace& ws, const State& state,
                          const SolverConfig& config);

/// Exact spectral integrating factor: v_hat *= e^{-mu |k|^2 dt},
/// S_hat *= e^{-gamma |k|^2 dt}. Unconditionally stable; gamma = 0 leaves S
/// untouched (the stress-diffusion path is structurally absent).
void diffusion_stage(const SpectralWorkspace& ws, State& state, const SolverConfig& config,
                     double dt);

struct ProxInfo {
  /// h^d sum G : S_after with G = (S_before - S_after)/tau, the discrete
  /// realization of the set-valued dissipation pairing <dP(S), S>.
  double subgrad_pairing = 0.0;
};

/// Backward-Euler resolution of the subdifferential: S <- prox_{tau P}(S).
/// By prox optimality G = (S_before - S_after)/tau is a subgradient at S_after.
void prox_stage(State& state, const PotentialSpec& potential, double tau, ProxInfo* info);

struct StepInfo {
  double subgrad_pairing = 0.0;
};

/// One full step of size config.dt.
///   Lie:    explicit RK2 (Heun) -> diffusion -> prox
///   Strang: half prox -> half diffusion -> explicit RK2 -> half diffusion -> half prox
/// Output invariants enforced: v re-projected, S re-deviatorized.
/// Throws CflViolationError (rejection) and BlowUpError (NaN or ||v||_inf > 1e6).
State step(const SpectralWorkspace& ws, const State& state, const SolverConfig& config,
           const PotentialSpec& potential, StepInfo* info = nullptr);

/// min(config.dt, cfl_safety * h / max(||v||_inf, 1e-12)).
double stable_dt(const State& state, const SolverConfig& config);

/// Per-record diagnostics; en_margin is filled by the diagnostics pass.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;        // E = 1/2||v||^2 + 1/2||S||^2
  double grad_v_sq = 0.0;     // ||grad v||^2
  double grad_S_sq = 0.0;     // ||grad S||^2
  double potential_value = 0.0;  // P(S), may be +inf
  double en_margin = 0.0;
  double subgrad_pairing = 0.0;  // <dP(S), S> realized by the prox stage
  double forcing_power = 0.0;    // <f, v>
  double coupling_power = 0.0;   // eta <sym grad v, S>
};

struct BlowUpInfo {
  double t = 0.0;
  double monitor = 0.0;  // strong-solution monitor psi at the last valid state
  std::string reason;
};

/// Recorded states at uniform spacing record_dt = record_every * dt,
/// with per-record diagnostics. Times are strictly increasing, spacing
/// uniform to 1e-12 (computed as index * record_dt).
struct Trajectory {
  Grid grid;
  double record_dt = 0.0;
  std::vector<State> states;
  std::vector<DiagnosticsRecord> records;
  std::optional<BlowUpInfo> blowup;

  std::size_t size() const { return states.size(); }
  /// Index of the record at time t (within 1e-9 of a record time).
  std::size_t index_at(double t) const;
};

/// Called after each recorded state, e.g. to write checkpoints.
using RecordSink = std::function<void(const State&, std::size_t record_index)>;

/// Iterates step() until t_end, recording every record_every steps
/// (the initial state is always recorded; t_end/dt must land on a step).
/// On blow-up the partial trajectory is returned with the error tag set.
/// Deterministic for identical inputs.
Trajectory run(const SpectralWorkspace& ws, const State& initial, const SolverConfig& config,
               const PotentialSpec& potential, int record_every,
               const RecordSink& sink = RecordSink());

/// Convenience overload building the initial state from a scenario.
Trajectory run(const SpectralWorkspace& ws, const ScenarioSpec& scenario,
               const SolverConfig& config, const PotentialSpec& potential, int record_every,
               const RecordSink& sink = RecordSink());

}  // namespace vep
