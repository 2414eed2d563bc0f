#include "vep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vep/errors.hpp"
#include "vep/rng.hpp"
#include "vep/scenario.hpp"

namespace vep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double x) { return x * x; }

/// L^p norm of the rank-3 gradient stack (nodewise magnitude over all
/// components of all derivative axes).
double grad_lp_norm(const std::vector<TensorField>& g, double p) {
  if (g.empty()) return 0.0;
  const Grid& grid = g.front().grid();
  const std::size_t nn = g.front().nodes();
  const int comps = g.front().comps();
  const bool inf_norm = std::isinf(p);
  detail::CompensatedSum acc;
  double vmax = 0.0;
  for (std::size_t k = 0; k < nn; ++k) {
    double s = 0.0;
    for (const TensorField& gl : g)
      for (int c = 0; c < comps; ++c) {
        const double x = gl.data()[static_cast<std::size_t>(c) * nn + k];
        s += x * x;
      }
    if (inf_norm)
      vmax = std::max(vmax, s);
    else
      acc.add(p == 2.0 ? s : std::pow(s, 0.5 * p));
  }
  if (inf_norm) return std::sqrt(vmax);
  const double sum = acc.value() * grid.cell_volume();
  return p == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / p);
}

double lp_norm_tensor_raw(const TensorField& t, double p) { return lp_norm(t, p); }

/// Trapezoid cumulative integral over the uniform record grid.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double dt) {
  std::vector<double> out(f.size(), 0.0);
  detail::CompensatedSum acc;
  for (std::size_t k = 1; k < f.size(); ++k) {
    acc.add(0.5 * dt * (f[k - 1] + f[k]));
    out[k] = acc.value();
  }
  return out;
}

struct WTerms {
  double grad_v = 0.0;   // mu ||grad dv||^2
  double grad_S = 0.0;   // gamma ||grad dS||^2 (gamma form only)
  double adv_v = 0.0;    // -int (dv.grad dv).v~
  double adv_S = 0.0;    // -int (dv.grad dS):S~   (gamma form)
  double adv_S0 = 0.0;   // +int (dS x dv) . grad S~ (zero form)
  double rot = 0.0;      // -int (dS W_d - W_d dS):S~
  double kR = 0.0;       // K(v~,S~) R
  double R = 0.0;
  double k_base = 0.0;   // k_eval with C = 1
};

/// Shared assembly of every term entering w_gamma / w_zero.
WTerms w_terms(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
               const RegularityWeight& weight, double mu, double gamma) {
  const Grid& g = state.v.grid();
  const int dim = g.dim;
  const std::size_t nn = g.node_count();

  const VectorField dv = subtract(state.v, pair.v);
  const TensorField dS = subtract(state.S.tensor(), pair.S);
  const TensorField grad_dv = gradient(ws, dv);

  // grad dS = spectral grad S - analytic grad S~ (axis by axis)
  std::vector<TensorField> grad_S = gradient(ws, state.S.tensor());
  for (int l = 0; l < dim; ++l) {
    TensorField& gl = grad_S[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < gl.size(); ++i)
      gl.data()[i] -= pair.grad_S[static_cast<std::size_t>(l)].data()[i];
  }
  const std::vector<TensorField>& grad_dS = grad_S;

  WTerms t;
  t.grad_v = mu * inner_product_l2(grad_dv, grad_dv);
  {
    detail::CompensatedSum acc;
    for (const TensorField& gl : grad_dS) acc.add(inner_product_l2(gl, gl));
    t.grad_S = gamma * acc.value();
  }

  detail::CompensatedSum adv_v, adv_S, adv_S0, rot;
  for (std::size_t k = 0; k < nn; ++k) {
    // (dv.grad dv) . v~
    double av = 0.0;
    for (int j = 0; j < dim; ++j) {
      double conv = 0.0;
      for (int l = 0; l < dim; ++l) conv += dv.at(l, k) * grad_dv.at(j, l, k);
      av += conv * pair.v.at(j, k);
    }
    adv_v.add(av);

    double as = 0.0, as0 = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double conv = 0.0;
        for (int l = 0; l < dim; ++l) conv += dv.at(l, k) * grad_dS[static_cast<std::size_t>(l)].at(i, j, k);
        as += conv * pair.S.at(i, j, k);
        double carry = 0.0;
        for (int l = 0; l < dim; ++l)
          carry += dv.at(l, k) * pair.grad_S[static_cast<std::size_t>(l)].at(i, j, k);
        as0 += dS.at(i, j, k) * carry;
      }
    adv_S.add(as);
    adv_S0.add(as0);

    // (dS W_d - W_d dS) : S~ with W_d = skew grad dv
    NodeTensor wd{dim, {}};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) wd(i, j) = 0.5 * (grad_dv.at(i, j, k) - grad_dv.at(j, i, k));
    const NodeTensor ds_k = dS.node(k);
    const NodeTensor comm = matmul(ds_k, wd) - matmul(wd, ds_k);
    rot.add(ddot(comm, pair.S.node(k)));
  }
  const double vol = g.cell_volume();
  t.adv_v = -adv_v.value() * vol;
  t.adv_S = -adv_S.value() * vol;
  t.adv_S0 = adv_S0.value() * vol;
  t.rot = -rot.value() * vol;

  t.R = relative_energy(state, pair);
  t.k_base = k_eval(weight.with_constant(1.0), pair);
  t.kR = weight.C * t.k_base * t.R;
  return t;
}

}  // namespace

// ---- RegularityWeight ---------------------------------------------------------

RegularityWeight RegularityWeight::weak_strong(double C, double r, double p) {
  if (C < 0.0) throw InvalidArgumentError("weight constant must be >= 0");
  RegularityWeight w;
  w.kind = Kind::WeakStrong;
  w.C = C;
  w.r = r;
  w.s = serrin_conjugate(r);
  w.p = p;
  w.q = serrin_conjugate(p);
  return w;
}

RegularityWeight RegularityWeight::tilde_s(double C) {
  if (C < 0.0) throw InvalidArgumentError("weight constant must be >= 0");
  RegularityWeight w;
  w.kind = Kind::TildeS;
  w.C = C;
  return w;
}

RegularityWeight RegularityWeight::ks(double C, double r) {
  if (C < 0.0) throw InvalidArgumentError("weight constant must be >= 0");
  RegularityWeight w;
  w.kind = Kind::Ks;
  w.C = C;
  w.r = r;
  w.s = serrin_conjugate(r);
  return w;
}

RegularityWeight RegularityWeight::with_constant(double c) const {
  RegularityWeight w = *this;
  w.C = c;
  return w;
}

double serrin_conjugate(double r) {
  if (!(r > 3.0)) throw InvalidArgumentError("serrin_conjugate requires r > 3");
  return 2.0 * r / (r - 3.0);
}

// ---- pointwise functionals ------------------------------------------------------

double energy(const State& state) {
  const double nv = lp_norm(state.v, 2.0);
  const double ns = lp_norm(state.S, 2.0);
  return 0.5 * nv * nv + 0.5 * ns * ns;
}

double relative_energy(const State& state, const PairSample& pair) {
  const VectorField dv = subtract(state.v, pair.v);
  const TensorField dS = subtract(state.S.tensor(), pair.S);
  return 0.5 * inner_product_l2(dv, dv) + 0.5 * inner_product_l2(dS, dS);
}

double k_eval(const RegularityWeight& w, const PairSample& pair) {
  switch (w.kind) {
    case RegularityWeight::Kind::Zero:
      return 0.0;
    case RegularityWeight::Kind::WeakStrong: {
      const double nv = lp_norm(pair.v, w.r);
      const double ns = lp_norm_tensor_raw(pair.S, w.p);
      return w.C * (std::pow(nv, w.s) + std::pow(ns, w.q) + ns * ns);
    }
    case RegularityWeight::Kind::TildeS: {
      const double ninf = lp_norm_tensor_raw(pair.S, kInf);
      const double ng3 = grad_lp_norm(pair.grad_S, 3.0);
      return w.C * (ninf * ninf + ng3 * ng3);
    }
    case RegularityWeight::Kind::Ks: {
      const double nv = lp_norm(pair.v, w.r);
      const double ninf = lp_norm_tensor_raw(pair.S, kInf);
      const double ng3 = grad_lp_norm(pair.grad_S, 3.0);
      return w.C * (std::pow(nv, w.s) + ninf * ninf + ng3 * ng3);
    }
  }
  return 0.0;
}

VectorField a1_apply(const SpectralWorkspace& ws, const PairSample& pair, double mu, double eta,
                     const ForcingSpec& f) {
  const Grid& g = pair.v.grid();
  const int dim = g.dim;
  VectorField out = pair.dt_v;
  const VectorField fv = sample_forcing(g, f, pair.t);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    for (int j = 0; j < dim; ++j) {
      double conv = 0.0;
      double div_s = 0.0;
      for (int l = 0; l < dim; ++l) {
        conv += pair.v.at(l, k) * pair.grad_v.at(j, l, k);
        div_s += pair.grad_S[static_cast<std::size_t>(l)].at(j, l, k);
      }
      out.at(j, k) += conv - eta * div_s - mu * pair.lap_v.at(j, k) - fv.at(j, k);
    }
  }
  (void)ws;
  return out;
}

TensorField a2_apply(const PairSample& pair, double gamma, double eta) {
  const Grid& g = pair.S.grid();
  const int dim = g.dim;
  TensorField out = pair.dt_S;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    NodeTensor w{dim, {}};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) w(i, j) = 0.5 * (pair.grad_v.at(i, j, k) - pair.grad_v.at(j, i, k));
    const NodeTensor s_k = pair.S.node(k);
    const NodeTensor comm = matmul(s_k, w) - matmul(w, s_k);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double conv = 0.0;
        for (int l = 0; l < dim; ++l)
          conv += pair.v.at(l, k) * pair.grad_S[static_cast<std::size_t>(l)].at(i, j, k);
        const double sym = 0.5 * (pair.grad_v.at(i, j, k) + pair.grad_v.at(j, i, k));
        out.at(i, j, k) += conv + comm(i, j) - gamma * pair.lap_S.at(i, j, k) - eta * sym;
      }
  }
  return out;
}

double w_gamma(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
               const RegularityWeight& weight, double mu, double gamma) {
  const WTerms t = w_terms(ws, state, pair, weight, mu, gamma);
  return t.grad_v + t.grad_S + t.adv_v + t.adv_S + t.rot + t.kR;
}

double w_zero(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
              const RegularityWeight& weight, double mu) {
  const WTerms t = w_terms(ws, state, pair, weight, mu, 0.0);
  return t.grad_v + t.adv_v + t.adv_S0 + t.rot + t.kR;
}

double w_zero_scale(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
                    const RegularityWeight& weight, double mu) {
  const WTerms t = w_terms(ws, state, pair, weight, mu, 0.0);
  return std::abs(t.grad_v) + std::abs(t.adv_v) + std::abs(t.adv_S0) + std::abs(t.rot) +
         std::abs(t.kR);
}

double exp_weight(const SpectralWorkspace& ws, const RegularityWeight& weight,
                  const TestPair& pair, double s, double t, double dt) {
  if (s > t) throw OrderingError("exp_weight requires s <= t");
  if (s == t) return 1.0;
  if (!(dt > 0.0)) throw InvalidArgumentError("exp_weight requires dt > 0");
  const auto n = std::max<long long>(1, std::llround((t - s) / dt));
  const double h = (t - s) / static_cast<double>(n);
  detail::CompensatedSum acc;
  double prev = k_eval(weight, pair.sample(ws, s));
  for (long long i = 1; i <= n; ++i) {
    const double tau = s + static_cast<double>(i) * h;
    const double cur = k_eval(weight, pair.sample(ws, tau));
    acc.add(0.5 * h * (prev + cur));
    prev = cur;
  }
  return std::exp(acc.value());
}

// ---- trajectory-level functionals -------------------------------------------------

namespace {

void require_records(const Trajectory& traj) {
  if (traj.states.size() < 2)
    throw InsufficientDataError("trajectory has fewer than two records");
  if (traj.states.size() != traj.records.size())
    throw InsufficientDataError("trajectory records and states out of sync");
}

}  // namespace

std::vector<double> balance_residual_series(const Trajectory& traj, const SolverConfig& config) {
  require_records(traj);
  const std::size_t n = traj.records.size();
  std::vector<double> diss(n), force(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const DiagnosticsRecord& r = traj.records[k];
    diss[k] = config.mu * r.grad_v_sq + r.subgrad_pairing + config.gamma * r.grad_S_sq;
    force[k] = r.forcing_power;
  }
  const std::vector<double> d_int = cumulative_trapezoid(diss, traj.record_dt);
  const std::vector<double> f_int = cumulative_trapezoid(force, traj.record_dt);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = traj.records[k].energy + d_int[k] - traj.records[0].energy - f_int[k];
  return out;
}

std::vector<double> energy_margin_series(const Trajectory& traj, const SolverConfig& config) {
  require_records(traj);
  const std::size_t n = traj.records.size();
  std::vector<double> diss(n), force(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const DiagnosticsRecord& r = traj.records[k];
    diss[k] = config.mu * r.grad_v_sq + config.gamma * r.grad_S_sq + r.potential_value;
    force[k] = r.forcing_power;
  }
  const std::vector<double> d_int = cumulative_trapezoid(diss, traj.record_dt);
  const std::vector<double> f_int = cumulative_trapezoid(force, traj.record_dt);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = traj.records[0].energy + f_int[k] - traj.records[k].energy - d_int[k];
  return out;
}

std::vector<double> stress_margin_series(const Trajectory& traj, const SolverConfig& config) {
  require_records(traj);
  const std::size_t n = traj.records.size();
  std::vector<double> diss(n), coup(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const DiagnosticsRecord& r = traj.records[k];
    diss[k] = config.gamma * r.grad_S_sq + r.potential_value;
    coup[k] = r.coupling_power;
  }
  const std::vector<double> d_int = cumulative_trapezoid(diss, traj.record_dt);
  const std::vector<double> c_int = cumulative_trapezoid(coup, traj.record_dt);
  const double s0 = lp_norm(traj.states[0].S, 2.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double st = lp_norm(traj.states[k].S, 2.0);
    out[k] = 0.5 * sq(s0) + c_int[k] - 0.5 * sq(st) - d_int[k];
  }
  return out;
}

double energy_balance_residual(const Trajectory& traj, const SolverConfig& config, double t) {
  return balance_residual_series(traj, config)[traj.index_at(t)];
}

double energy_inequality_margin(const Trajectory& traj, const SolverConfig& config, double t) {
  return energy_margin_series(traj, config)[traj.index_at(t)];
}

double stress_energy_margin(const Trajectory& traj, const SolverConfig& config, double t) {
  return stress_margin_series(traj, config)[traj.index_at(t)];
}

double strong_monitor(const SpectralWorkspace& ws, const State& state, double gamma,
                      const PotentialSpec& potential) {
  const double gv = h1_seminorm(ws, state.v);
  const double gs = h1_seminorm(ws, state.S);
  return sq(gv) + 0.5 * gamma * sq(gs) + total_value(potential, state.S) + 1.0;
}

GapSeries relen_series(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                       const RegularityWeight& weight, const PotentialSpec& potential, double mu,
                       double eta, double gamma_form, const ForcingSpec& f) {
  require_records(traj);
  const std::size_t n = traj.states.size();
  GapSeries out;
  out.t.resize(n);
  out.R.resize(n);
  out.gap.resize(n);
  out.K_int.resize(n);

  std::vector<double> integrand(n), kv(n);
  bool pair_infeasible = false;
  std::size_t infeasible_from = n;

  for (std::size_t k = 0; k < n; ++k) {
    const State& st = traj.states[k];
    const PairSample ps = pair.sample(ws, st.t);
    out.t[k] = st.t;
    out.R[k] = relative_energy(st, ps);
    kv[k] = k_eval(weight, ps);

    const double p_state = total_value(potential, st.S);
    const double p_pair = total_value(potential, deviatoric_part(ps.S));
    if (!std::isfinite(p_pair) && !pair_infeasible) {
      pair_infeasible = true;
      infeasible_from = k;
    }

    const double w = gamma_form > 0.0 ? w_gamma(ws, st, ps, weight, mu, gamma_form)
                                      : w_zero(ws, st, ps, weight, mu);

    const VectorField a1 = a1_apply(ws, ps, mu, eta, f);
    const TensorField a2 = a2_apply(ps, gamma_form, eta);
    const VectorField dv = subtract(st.v, ps.v);
    const TensorField dS = subtract(st.S.tensor(), ps.S);
    const double pairing = inner_product_l2(a1, dv) + inner_product_l2(a2, dS);

    integrand[k] = w + p_state - p_pair + pairing;
  }

  const std::vector<double> ki = cumulative_trapezoid(kv, traj.record_dt);
  out.K_int = ki;

  // gap(t) = R(t) + e^{KI(t)} ( int_0^t I e^{-KI} - R(0) )
  std::vector<double> damped(n);
  for (std::size_t k = 0; k < n; ++k)
    damped[k] = std::isfinite(integrand[k]) ? integrand[k] * std::exp(-ki[k]) : integrand[k];
  const std::vector<double> j_int = cumulative_trapezoid(damped, traj.record_dt);

  for (std::size_t k = 0; k < n; ++k) {
    if (pair_infeasible && k >= infeasible_from) {
      out.gap[k] = -kInf;  // inequality trivially true; flagged by the caller
      continue;
    }
    out.gap[k] = out.R[k] + std::exp(ki[k]) * (j_int[k] - out.R[0]);
  }
  return out;
}

double relen_gap(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                 const RegularityWeight& weight, const PotentialSpec& potential, double mu,
                 double eta, double gamma_form, const ForcingSpec& f, double t) {
  const GapSeries s = relen_series(ws, traj, pair, weight, potential, mu, eta, gamma_form, f);
  return s.gap[traj.index_at(t)];
}

GapSeries varineq_series(const SpectralWorkspace& ws, const Trajectory& traj,
                         const TestPair& pair, const PotentialSpec& potential, double gamma_form,
                         double eta) {
  require_records(traj);
  const std::size_t n = traj.states.size();
  const Grid& g = traj.grid;
  const int dim = g.dim;
  const std::size_t nn = g.node_count();

  GapSeries out;
  out.t.resize(n);
  out.R.resize(n);
  out.gap.resize(n);
  out.K_int.assign(n, 0.0);

  std::vector<double> integrand(n);
  std::vector<double> half_dist(n);

  for (std::size_t k = 0; k < n; ++k) {
    const State& st = traj.states[k];
    const PairSample ps = pair.sample(ws, st.t);
    out.t[k] = st.t;

    const TensorField dS = subtract(st.S.tensor(), ps.S);
    half_dist[k] = 0.5 * inner_product_l2(dS, dS);
    out.R[k] = half_dist[k];

    const double p_state = total_value(potential, st.S);
    const double p_pair = total_value(potential, deviatoric_part(ps.S));

    const TensorField grad_v = gradient(ws, st.v);

    double term = inner_product_l2(ps.dt_S, dS) + p_state - p_pair;

    if (gamma_form > 0.0) {
      const std::vector<TensorField> grad_S = gradient(ws, st.S.tensor());
      detail::CompensatedSum acc;
      for (int l = 0; l < dim; ++l) {
        const TensorField& gl = grad_S[static_cast<std::size_t>(l)];
        const TensorField& pl = ps.grad_S[static_cast<std::size_t>(l)];
        double s = 0.0;
        detail::CompensatedSum node_acc;
        for (std::size_t i = 0; i < gl.size(); ++i)
          node_acc.add(gl.data()[i] * (gl.data()[i] - pl.data()[i]));
        s = node_acc.value() * g.cell_volume();
        acc.add(s);
      }
      term += gamma_form * acc.value();

      // -( v.grad S + S W - W S , S~ )
      const std::vector<TensorField> grad_S_state = grad_S;
      detail::CompensatedSum adv;
      for (std::size_t kk = 0; kk < nn; ++kk) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double conv = 0.0;
            for (int l = 0; l < dim; ++l)
              conv += st.v.at(l, kk) * grad_S_state[static_cast<std::size_t>(l)].at(i, j, kk);
            s += conv * ps.S.at(i, j, kk);
          }
        adv.add(s);
      }
      term -= adv.value() * g.cell_volume();
    } else {
      // integrated-by-parts advection: +( S x v , grad S~ )
      detail::CompensatedSum adv;
      for (std::size_t kk = 0; kk < nn; ++kk) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double carry = 0.0;
            for (int l = 0; l < dim; ++l)
              carry += st.v.at(l, kk) * ps.grad_S[static_cast<std::size_t>(l)].at(i, j, kk);
            s += st.S.at(i, j, kk) * carry;
          }
        adv.add(s);
      }
      term += adv.value() * g.cell_volume();
    }

    // rotation term -( S W - W S , S~ ), W = skew grad v of the state
    detail::CompensatedSum rot;
    for (std::size_t kk = 0; kk < nn; ++kk) {
      NodeTensor w{dim, {}};
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) w(i, j) = 0.5 * (grad_v.at(i, j, kk) - grad_v.at(j, i, kk));
      const NodeTensor s_k = st.S.node(kk);
      const NodeTensor comm = matmul(s_k, w) - matmul(w, s_k);
      rot.add(ddot(comm, ps.S.node(kk)));
    }
    term -= rot.value() * g.cell_volume();

    // -eta ( sym grad v , S - S~ )
    const TensorField sym = sym_part(grad_v);
    term -= eta * inner_product_l2(sym, dS);

    integrand[k] = term;
  }

  const std::vector<double> t_int = cumulative_trapezoid(integrand, traj.record_dt);
  for (std::size_t k = 0; k < n; ++k) {
    out.gap[k] = std::isfinite(t_int[k]) ? half_dist[k] + t_int[k] - half_dist[0] : -kInf;
  }
  return out;
}

double varineq_gap(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                   const PotentialSpec& potential, double gamma_form, double eta, double t) {
  const GapSeries s = varineq_series(ws, traj, pair, potential, gamma_form, eta);
  return s.gap[traj.index_at(t)];
}

WeakStrongSeries weak_strong_series(const SpectralWorkspace& ws, const Trajectory& weak,
                                    const TestPair& strong_ref, const RegularityWeight& weight,
                                    double mu, double gamma) {
  require_records(weak);
  const std::size_t n = weak.states.size();
  WeakStrongSeries out;
  out.t.resize(n);
  out.R.resize(n);
  out.lhs.resize(n);
  out.rhs.resize(n);
  out.gap.resize(n);
  out.K_int.resize(n);

  std::vector<double> diss(n), kv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const State& st = weak.states[k];
    const PairSample ps = strong_ref.sample(ws, st.t);
    out.t[k] = st.t;
    out.R[k] = relative_energy(st, ps);
    kv[k] = k_eval(weight, ps);

    const VectorField dv = subtract(st.v, ps.v);
    const TensorField grad_dv = gradient(ws, dv);
    double gs = 0.0;
    if (gamma > 0.0) {
      std::vector<TensorField> grad_S = gradient(ws, st.S.tensor());
      detail::CompensatedSum acc;
      for (int l = 0; l < st.v.grid().dim; ++l) {
        TensorField& gl = grad_S[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < gl.size(); ++i)
          gl.data()[i] -= ps.grad_S[static_cast<std::size_t>(l)].data()[i];
        acc.add(inner_product_l2(gl, gl));
      }
      gs = acc.value();
    }
    diss[k] = 0.5 * mu * inner_product_l2(grad_dv, grad_dv) + 0.5 * gamma * gs;
  }

  const std::vector<double> ki = cumulative_trapezoid(kv, weak.record_dt);
  out.K_int = ki;
  std::vector<double> damped(n);
  for (std::size_t k = 0; k < n; ++k) damped[k] = diss[k] * std::exp(-ki[k]);
  const std::vector<double> j_int = cumulative_trapezoid(damped, weak.record_dt);

  for (std::size_t k = 0; k < n; ++k) {
    out.lhs[k] = out.R[k] + std::exp(ki[k]) * j_int[k];
    out.rhs[k] = out.R[0] * std::exp(ki[k]);
    out.gap[k] = out.lhs[k] - out.rhs[k];
  }
  return out;
}

double weak_strong_gap(const SpectralWorkspace& ws, const Trajectory& weak,
                       const TestPair& strong_ref, const RegularityWeight& weight, double mu,
                       double gamma, double t) {
  const WeakStrongSeries s = weak_strong_series(ws, weak, strong_ref, weight, mu, gamma);
  return s.gap[weak.index_at(t)];
}

bool monotonicity_check(const SpectralWorkspace& ws, const Trajectory& traj,
                        const RegularityWeight& weightK, const RegularityWeight& weightL,
                        const TestPair& pair, const PotentialSpec& potential, double mu,
                        double eta, double gamma_form, const ForcingSpec& f, double t,
                        double tol) {
  require_records(traj);
  for (const State& st : traj.states) {
    const PairSample ps = pair.sample(ws, st.t);
    const double kk = k_eval(weightK, ps);
    const double kl = k_eval(weightL, ps);
    if (kk > kl + 1e-12 * std::max(1.0, kl))
      throw OrderingError("weight ordering K <= L violated at t = " + std::to_string(st.t));
  }
  const double gap_k = relen_gap(ws, traj, pair, weightK, potential, mu, eta, gamma_form, f, t);
  if (gap_k > tol) return true;  // no claim to check
  const double gap_l = relen_gap(ws, traj, pair, weightL, potential, mu, eta, gamma_form, f, t);
  return gap_l <= tol;
}

// ---- calibration ------------------------------------------------------------------

CoercivitySample coercivity_sample(const SpectralWorkspace& ws, std::uint64_t seed,
                                   std::uint64_t index) {
  const std::uint64_t key = rng::value(seed, 0x5EED0000ULL + index);
  // amplitudes spread over [0.05, ~3] so calibration sees several regimes
  const auto amp = [&](std::uint64_t slot) {
    return 0.05 * std::pow(60.0, rng::uniform01(key, slot));
  };
  CoercivitySample s;
  s.state.t = 0.0;
  s.state.v = random_divfree(ws, rng::value(key, 1), 2.5);
  scale_in_place(s.state.v, amp(11));
  TensorField st = random_deviatoric(ws, rng::value(key, 2), 2.5).tensor();
  scale_in_place(st, amp(12));
  s.state.S = deviatoric_part(st);

  s.pair_v = random_divfree(ws, rng::value(key, 3), 3.0);
  scale_in_place(s.pair_v, amp(13));
  TensorField pt = random_deviatoric(ws, rng::value(key, 4), 3.0).tensor();
  scale_in_place(pt, amp(14));
  s.pair_S = deviatoric_part(pt);
  return s;
}

CalibrationResult calibrate_weight(const SpectralWorkspace& ws, const RegularityWeight& base,
                                   double mu, double gamma, int samples, std::uint64_t seed,
                                   double safety) {
  CalibrationResult out;
  out.samples = samples;
  out.safety = safety;
  if (base.kind == RegularityWeight::Kind::Zero) {
    out.C = 0.0;
    return out;
  }

  double need = 0.0;
  for (int i = 0; i < samples; ++i) {
    const CoercivitySample cs = coercivity_sample(ws, seed, static_cast<std::uint64_t>(i));
    const TestPairPtr pair = frozen_pair(cs.pair_v, cs.pair_S, "calib");
    const PairSample ps = pair->sample(ws, 0.0);

    const WTerms t = w_terms(ws, cs.state, ps, base.with_constant(0.0), mu, gamma);
    double target, base_val;
    if (base.kind == RegularityWeight::Kind::WeakStrong) {
      target = 0.5 * t.grad_v + 0.5 * t.grad_S;  // mu/2, gamma/2 of the full terms
      base_val = t.grad_v + t.grad_S + t.adv_v + t.adv_S + t.rot;
    } else {
      target = 0.0;
      base_val = t.grad_v + t.adv_v + t.adv_S0 + t.rot;
    }
    const double denom = t.k_base * t.R;
    if (denom > 0.0 && base_val < target) need = std::max(need, (target - base_val) / denom);
  }
  out.C = safety * need;
  return out;
}

}  // namespace vep
