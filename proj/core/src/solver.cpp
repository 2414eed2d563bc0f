#include "vep/solver.hpp"

#include <cmath>
#include <string>

#include "vep/errors.hpp"

namespace vep {

namespace {

constexpr double kBlowUpVelocity = 1e6;
constexpr double kCflFloor = 1e-12;

double max_velocity(const VectorField& v) { return lp_norm(v, std::numeric_limits<double>::infinity()); }

State advance_explicit_rk2(const SpectralWorkspace& ws, const State& state,
                           const SolverConfig& config) {
  const double dt = config.dt;
  const Tendencies t0 = explicit_stage(ws, state, config);

  State predictor;
  predictor.t = state.t + dt;
  predictor.v = state.v;
  axpy_in_place(predictor.v, dt, t0.dv);
  TensorField s_pred = state.S.tensor();
  axpy_in_place(s_pred, dt, t0.dS);
  // tendencies keep S symmetric trace-free up to roundoff
  predictor.S = DeviatoricField::unchecked(std::move(s_pred));

  const Tendencies t1 = explicit_stage(ws, predictor, config);

  State out;
  out.t = state.t + dt;
  out.v = state.v;
  axpy_in_place(out.v, 0.5 * dt, t0.dv);
  axpy_in_place(out.v, 0.5 * dt, t1.dv);
  TensorField s_out = state.S.tensor();
  axpy_in_place(s_out, 0.5 * dt, t0.dS);
  axpy_in_place(s_out, 0.5 * dt, t1.dS);
  out.S = DeviatoricField::unchecked(std::move(s_out));
  return out;
}

}  // namespace

void validate(const SolverConfig& c) {
  if (!(c.mu > 0.0)) throw InvalidArgumentError("solver requires mu > 0");
  if (c.eta < 0.0) throw InvalidArgumentError("solver requires eta >= 0");
  if (c.gamma < 0.0) throw InvalidArgumentError("solver requires gamma >= 0");
  if (!(c.dt > 0.0)) throw InvalidArgumentError("solver requires dt > 0");
  if (c.t_end < 0.0) throw InvalidArgumentError("solver requires t_end >= 0");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
    throw InvalidArgumentError("cfl_safety must lie in (0,1]");
}

Tendencies explicit_stage(const SpectralWorkspace& ws, const State& state,
                          const SolverConfig& config) {
  const Grid& g = state.v.grid();
  const double vmax = max_velocity(state.v);
  if (vmax * config.dt / g.h() > config.cfl_safety)
    throw CflViolationError("advective CFL bound exceeded at t = " + std::to_string(state.t),
                            config.cfl_safety * g.h() / std::max(vmax, kCflFloor));

  const TensorField grad_v = gradient(ws, state.v);
  const TensorField w = skew_part(grad_v);
  const TensorField sym = sym_part(grad_v);

  // dv = P( -(v.grad)v + eta Div S + f )
  VectorField rhs_v = advect(ws, state.v, state.v, config.dealias);
  scale_in_place(rhs_v, -1.0);
  if (config.eta != 0.0) {
    const VectorField div_s = divergence_tensor(ws, state.S.tensor());
    axpy_in_place(rhs_v, config.eta, div_s);
  }
  if (config.forcing.kind != ForcingSpec::Kind::None) {
    const VectorField f = sample_forcing(g, config.forcing, state.t);
    axpy_in_place(rhs_v, 1.0, f);
  }

  Tendencies out;
  out.dv = leray_project(ws, rhs_v);

  // dS = -(v.grad)S - (S W - W S) + eta sym grad v
  out.dS = advect(ws, state.v, state.S.tensor(), config.dealias);
  scale_in_place(out.dS, -1.0);
  DeviatoricField rot = jaumann_rotation(state.S, w);
  TensorField rot_t =
      config.dealias ? dealias(ws, rot.tensor()) : std::move(rot.tensor());
  axpy_in_place(out.dS, -1.0, rot_t);
  if (config.eta != 0.0) axpy_in_place(out.dS, config.eta, sym);
  return out;
}

void diffusion_stage(const SpectralWorkspace& ws, State& state, const SolverConfig& config,
                     double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("diffusion_stage requires dt > 0");
  heat_decay(ws, state.v, config.mu, dt);
  if (config.gamma != 0.0) heat_decay(ws, state.S.tensor(), config.gamma, dt);
}

void prox_stage(State& state, const PotentialSpec& potential, double tau, ProxInfo* info) {
  if (!(tau > 0.0)) throw InvalidArgumentError("prox_stage requires tau > 0");
  if (potential.kind == PotentialSpec::Kind::Zero) {
    if (info) info->subgrad_pairing = 0.0;
    return;
  }
  DeviatoricField before = state.S;
  state.S = prox_field(potential, tau, state.S);
  if (info) {
    // G = (S_before - S_after)/tau is a subgradient at S_after
    const TensorField diff = subtract(before.tensor(), state.S.tensor());
    info->subgrad_pairing = inner_product_l2(diff, state.S.tensor()) / tau;
  }
}

State step(const SpectralWorkspace& ws, const State& state, const SolverConfig& config,
           const PotentialSpec& potential, StepInfo* info) {
  const double dt = config.dt;
  State out;
  double pairing = 0.0;

  if (config.splitting == Splitting::Lie) {
    out = advance_explicit_rk2(ws, state, config);
    diffusion_stage(ws, out, config, dt);
    ProxInfo pi;
    prox_stage(out, potential, dt, &pi);
    pairing = pi.subgrad_pairing;
  } else {
    out = state;
    ProxInfo p1, p2;
    prox_stage(out, potential, 0.5 * dt, &p1);
    diffusion_stage(ws, out, config, 0.5 * dt);
    out = advance_explicit_rk2(ws, out, config);
    diffusion_stage(ws, out, config, 0.5 * dt);
    prox_stage(out, potential, 0.5 * dt, &p2);
    // each half prox covers tau = dt/2 of the step
    pairing = 0.5 * (p1.subgrad_pairing + p2.subgrad_pairing);
  }

  out.v = leray_project(ws, out.v);
  out.S = deviatoric_part(out.S.tensor());

  if (!all_finite(out.v) || !all_finite(out.S.tensor()))
    throw BlowUpError("non-finite state at t = " + std::to_string(out.t), out.t);
  if (max_velocity(out.v) > kBlowUpVelocity)
    throw BlowUpError("velocity above abort threshold at t = " + std::to_string(out.t), out.t);

  if (info) info->subgrad_pairing = pairing;
  return out;
}

double stable_dt(const State& state, const SolverConfig& config) {
  const double vmax = std::max(max_velocity(state.v), kCflFloor);
  return std::min(config.dt, config.cfl_safety * state.v.grid().h() / vmax);
}

std::size_t Trajectory::index_at(double t) const {
  if (states.empty()) throw InsufficientDataError("empty trajectory");
  if (record_dt == 0.0) return 0;
  const auto k = static_cast<long long>(std::llround(t / record_dt));
  if (k < 0 || k >= static_cast<long long>(states.size()) ||
      std::abs(t - static_cast<double>(k) * record_dt) > 1e-9 * std::max(1.0, std::abs(t)))
    throw InsufficientDataError("time " + std::to_string(t) + " not on the record grid");
  return static_cast<std::size_t>(k);
}

namespace {

DiagnosticsRecord make_record(const SpectralWorkspace& ws, const State& state,
                              const SolverConfig& config, const PotentialSpec& potential,
                              double subgrad_pairing) {
  DiagnosticsRecord r;
  r.t = state.t;
  const double nv = lp_norm(state.v, 2.0);
  const double ns = lp_norm(state.S, 2.0);
  r.energy = 0.5 * nv * nv + 0.5 * ns * ns;
  const TensorField grad_v = gradient(ws, state.v);
  r.grad_v_sq = inner_product_l2(grad_v, grad_v);
  const std::vector<TensorField> grad_s = gradient(ws, state.S.tensor());
  detail::CompensatedSum gs;
  for (const TensorField& gl : grad_s) gs.add(inner_product_l2(gl, gl));
  r.grad_S_sq = gs.value();
  r.potential_value = total_value(potential, state.S);
  r.subgrad_pairing = subgrad_pairing;
  if (config.forcing.kind != ForcingSpec::Kind::None) {
    const VectorField f = sample_forcing(state.v.grid(), config.forcing, state.t);
    r.forcing_power = inner_product_l2(f, state.v);
  }
  r.coupling_power = config.eta * inner_product_l2(sym_part(grad_v), state.S.tensor());
  return r;
}

/// The pairing sample at t = 0: probe prox without applying it.
double initial_pairing(const State& state, const SolverConfig& config,
                       const PotentialSpec& potential) {
  if (potential.kind == PotentialSpec::Kind::Zero) return 0.0;
  const DeviatoricField after = prox_field(potential, config.dt, state.S);
  const TensorField diff = subtract(state.S.tensor(), after.tensor());
  return inner_product_l2(diff, after.tensor()) / config.dt;
}

}  // namespace

Trajectory run(const SpectralWorkspace& ws, const State& initial, const SolverConfig& config,
               const PotentialSpec& potential, int record_every, const RecordSink& sink) {
  validate(config);
  if (record_every < 1) throw InvalidArgumentError("record_every must be >= 1");
  if (!std::isfinite(total_value(potential, initial.S)))
    throw InvalidArgumentError("initial stress is infeasible for the yield potential");

  const auto steps = static_cast<long long>(std::llround(config.t_end / config.dt));
  if (std::abs(config.t_end - static_cast<double>(steps) * config.dt) >
      1e-8 * std::max(config.dt, config.t_end))
    throw InvalidArgumentError("t_end must be an integer multiple of dt");
  if (steps % record_every != 0 && steps > 0)
    throw InvalidArgumentError("t_end/dt must be a multiple of record_every");

  Trajectory traj;
  traj.grid = initial.v.grid();
  traj.record_dt = config.dt * record_every;

  State current = initial;
  current.t = 0.0;
  traj.states.push_back(current);
  traj.records.push_back(
      make_record(ws, current, config, potential, initial_pairing(current, config, potential)));
  if (sink) sink(current, 0);

  for (long long i = 0; i < steps; ++i) {
    StepInfo info;
    try {
      current = step(ws, current, config, potential, &info);
    } catch (const BlowUpError& e) {
      BlowUpInfo b;
      b.t = e.t;
      b.reason = e.what();
      const DiagnosticsRecord& last = traj.records.back();
      b.monitor = last.grad_v_sq + 0.5 * config.gamma * last.grad_S_sq + last.potential_value + 1.0;
      traj.blowup = b;
      return traj;
    }
    current.t = static_cast<double>(i + 1) * config.dt;  // avoid accumulated drift
    if ((i + 1) % record_every == 0) {
      traj.states.push_back(current);
      traj.records.push_back(make_record(ws, current, config, potential, info.subgrad_pairing));
      if (sink) sink(current, traj.states.size() - 1);
    }
  }
  return traj;
}

Trajectory run(const SpectralWorkspace& ws, const ScenarioSpec& scenario,
               const SolverConfig& config, const PotentialSpec& potential, int record_every,
               const RecordSink& sink) {
  return run(ws, initial_state(ws, scenario), config, potential, record_every, sink);
}

}  // namespace vep
