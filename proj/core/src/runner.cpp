#include "vep/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <memory>
#include <sstream>

#include "vep/checkpoint.hpp"
#include "vep/csv.hpp"
#include "vep/errors.hpp"
#include "vep/rng.hpp"

namespace vep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RegularityWeight build_weight(const SpectralWorkspace& ws, const RunConfig& config,
                              Report* report) {
  const DiagnosticsConfig& d = config.diagnostics;
  RegularityWeight base;
  switch (d.weight_kind) {
    case RegularityWeight::Kind::Zero:
      base = RegularityWeight::zero();
      break;
    case RegularityWeight::Kind::WeakStrong:
      base = RegularityWeight::weak_strong(d.weight_C, d.weight_r, d.weight_p);
      break;
    case RegularityWeight::Kind::TildeS:
      base = RegularityWeight::tilde_s(d.weight_C);
      break;
    case RegularityWeight::Kind::Ks:
      base = RegularityWeight::ks(d.weight_C, d.weight_r);
      break;
  }
  if (d.calibrate && base.kind != RegularityWeight::Kind::Zero) {
    const CalibrationResult cal = calibrate_weight(ws, base, config.solver.mu,
                                                   config.solver.gamma, d.calib_samples,
                                                   d.calib_seed);
    base = base.with_constant(cal.C);
    if (report) report->add("weight.calibrated_C", cal.C);
  } else if (report) {
    report->add("weight.C", base.C);
  }
  return base;
}

/// Run all jobs with at most `threads` in flight; results keep job order.
template <class Job>
std::vector<Trajectory> run_jobs(std::vector<Job>& jobs, int threads) {
  std::vector<Trajectory> out(jobs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
    return out;
  }
  std::size_t next = 0;
  while (next < jobs.size()) {
    const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                    jobs.size() - next);
    std::vector<std::future<Trajectory>> fs;
    for (std::size_t b = 0; b < batch; ++b)
      fs.push_back(std::async(std::launch::async, jobs[next + b]));
    for (std::size_t b = 0; b < batch; ++b) out[next + b] = fs[b].get();
    next += batch;
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_val(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  return m;
}

double min_val(const std::vector<double>& v) {
  double m = kInf;
  for (double x : v) m = std::min(m, x);
  return m;
}

}  // namespace

void Report::add(const std::string& key, const std::string& value) {
  lines_.emplace_back(key, value);
}

void Report::add(const std::string& key, double value) {
  lines_.emplace_back(key, format_number(value));
}

void Report::add(const std::string& key, bool pass) {
  lines_.emplace_back(key, pass ? "pass" : "FAIL");
  if (!pass) ++failures_;
}

std::string Report::text() const {
  std::ostringstream out;
  for (const auto& [k, v] : lines_) out << k << "=" << v << "\n";
  return out.str();
}

RunArtifacts simulate(const RunConfig& config, bool write_outputs, Report* report) {
  SpectralWorkspace ws(config.scenario.grid);
  const State initial = initial_state(ws, config.scenario);

  std::filesystem::path outdir(config.output.directory);
  RecordSink sink;
  if (write_outputs && config.output.checkpoint_every > 0) {
    if (config.output.checkpoint_every % config.output.record_every != 0)
      throw ConfigError("checkpoint_every must be a multiple of record_every");
    const int every_records = config.output.checkpoint_every / config.output.record_every;
    std::filesystem::create_directories(outdir);
    sink = [outdir, every_records](const State& s, std::size_t idx) {
      if (every_records > 0 && idx % static_cast<std::size_t>(every_records) == 0)
        write_state((outdir / ("state_" + std::to_string(idx) + ".ckpt")).string(), s);
    };
  }

  RunArtifacts art;
  art.trajectory =
      run(ws, initial, config.solver, config.potential, config.output.record_every, sink);
  art.E0 = art.trajectory.records.empty() ? 0.0 : art.trajectory.records.front().energy;
  art.weight = build_weight(ws, config, report);

  Trajectory& traj = art.trajectory;
  if (!traj.blowup && traj.records.size() >= 2) {
    const std::vector<double> margin = energy_margin_series(traj, config.solver);
    for (std::size_t k = 0; k < traj.records.size(); ++k) traj.records[k].en_margin = margin[k];
  }

  std::vector<PairColumns> pair_cols;
  if (!traj.blowup && traj.records.size() >= 2) {
    for (const PairConfig& pc : config.diagnostics.pairs) {
      const TestPairPtr pair = pc.build(config.solver);
      PairColumns col;
      col.name = pair->name();
      const GapSeries rs =
          relen_series(ws, traj, *pair, art.weight, config.potential, config.solver.mu,
                       config.solver.eta, config.solver.gamma, config.solver.forcing);
      const WeakStrongSeries wss =
          weak_strong_series(ws, traj, *pair, art.weight, config.solver.mu, config.solver.gamma);
      col.relen_R = rs.R;
      col.relen_gap = rs.gap;
      col.K_int = rs.K_int;
      col.ws_gap = wss.gap;
      pair_cols.push_back(std::move(col));
    }
  }

  art.csv = diagnostics_csv(traj, pair_cols);
  if (write_outputs) {
    std::filesystem::create_directories(outdir);
    write_text_file((outdir / "diagnostics.csv").string(), art.csv);
    write_text_file((outdir / "config.ini").string(), serialize_config(config));
  }

  if (report) {
    report->add("run.scenario", config.scenario.name);
    report->add("run.E0", art.E0);
    if (traj.blowup) {
      report->add("run.blowup_t", traj.blowup->t);
      report->add("run.blowup_monitor", traj.blowup->monitor);
      report->add("run.blowup_reason", traj.blowup->reason);
    } else {
      report->add("run.E_end", traj.records.back().energy);
      report->add("run.en_margin_end", traj.records.back().en_margin);
    }
  }
  return art;
}

Report verify(const RunConfig& config, const std::string& kind, bool write_outputs) {
  Report report;
  report.add("verify.kind", kind);
  RunArtifacts art = simulate(config, write_outputs, &report);
  if (art.trajectory.blowup) {
    report.add("verify.trajectory_complete", false);
    return report;
  }
  const Trajectory& traj = art.trajectory;
  SpectralWorkspace ws(config.scenario.grid);
  const double e0 = art.E0;
  const double scale = std::max(1.0, e0);

  if (kind == "energy") {
    const std::vector<double> margin = energy_margin_series(traj, config.solver);
    const std::vector<double> residual = balance_residual_series(traj, config.solver);
    const std::vector<double> s_margin = stress_margin_series(traj, config.solver);
    report.add("energy.margin_min", min_val(margin));
    report.add("energy.margin_tol", -1e-8 * e0);
    report.add("energy.margin_pass", min_val(margin) >= -1e-8 * e0);
    report.add("energy.balance_residual_end", residual.back());
    report.add("energy.stress_margin_end", s_margin.back());
    return report;
  }

  if (kind == "relen" || kind == "varineq") {
    // reduction cross-checks against the zero pair
    const TestPairPtr zp = zero_pair();
    if (kind == "relen") {
      const GapSeries zs =
          relen_series(ws, traj, *zp, art.weight, config.potential, config.solver.mu,
                       config.solver.eta, config.solver.gamma, config.solver.forcing);
      const std::vector<double> margin = energy_margin_series(traj, config.solver);
      double worst = 0.0;
      for (std::size_t k = 0; k < zs.gap.size(); ++k)
        worst = std::max(worst, std::abs(zs.gap[k] + margin[k]));
      report.add("relen.zero_pair_reduction_defect", worst);
      report.add("relen.zero_pair_reduction_pass", worst <= 1e-9 * scale);
    } else {
      const GapSeries zs = varineq_series(ws, traj, *zp, config.potential, config.solver.gamma,
                                          config.solver.eta);
      const std::vector<double> s_margin = stress_margin_series(traj, config.solver);
      double worst = 0.0;
      for (std::size_t k = 0; k < zs.gap.size(); ++k)
        worst = std::max(worst, std::abs(zs.gap[k] + s_margin[k]));
      report.add("varineq.zero_pair_reduction_defect", worst);
      report.add("varineq.zero_pair_reduction_pass", worst <= 1e-9 * scale);
    }

    for (const PairConfig& pc : config.diagnostics.pairs) {
      const TestPairPtr pair = pc.build(config.solver);
      const std::string prefix = kind + "." + pair->name();
      if (kind == "relen") {
        const GapSeries gs =
            relen_series(ws, traj, *pair, art.weight, config.potential, config.solver.mu,
                         config.solver.eta, config.solver.gamma, config.solver.forcing);
        const double gmax = max_val(gs.gap);
        report.add(prefix + ".gap_max", gmax);
        report.add(prefix + ".tol", 0.01 * e0);
        report.add(prefix + ".pass", gmax <= 0.01 * e0);
        report.add(prefix + ".K_int_end", gs.K_int.back());
      } else {
        const GapSeries gs = varineq_series(ws, traj, *pair, config.potential,
                                            config.solver.gamma, config.solver.eta);
        const double gmax = max_val(gs.gap);
        report.add(prefix + ".gap_max", gmax);
        report.add(prefix + ".tol", 0.01 * std::max(e0, 1.0));
        report.add(prefix + ".pass", gmax <= 0.01 * std::max(e0, 1.0));
      }
    }
    return report;
  }

  throw InvalidArgumentError("verify kind must be energy, varineq or relen");
}

Report weak_strong_experiment(const RunConfig& config, double delta, bool write_outputs,
                              int threads) {
  if (delta < 0.0) throw InvalidArgumentError("weak-strong delta must be >= 0");
  Report report;
  report.add("weakstrong.delta", delta);

  SpectralWorkspace ws(config.scenario.grid);
  const State base_initial = initial_state(ws, config.scenario);
  const PerturbResult pert =
      perturb(ws, base_initial, delta, config.weak_strong.noise_seed);
  report.add("weakstrong.R0", pert.relative_energy);

  std::vector<std::function<Trajectory()>> jobs;
  jobs.emplace_back([&] {
    return run(ws, base_initial, config.solver, config.potential, config.output.record_every);
  });
  jobs.emplace_back([&] {
    return run(ws, pert.state, config.solver, config.potential, config.output.record_every);
  });
  std::vector<Trajectory> trajs = run_jobs(jobs, threads);
  const Trajectory& base = trajs[0];
  const Trajectory& weak = trajs[1];
  if (base.blowup || weak.blowup) {
    report.add("weakstrong.trajectory_complete", false);
    return report;
  }

  RunConfig wc = config;
  wc.diagnostics.weight_kind = RegularityWeight::Kind::WeakStrong;
  const RegularityWeight weight = build_weight(ws, wc, &report);

  auto base_ptr = std::make_shared<Trajectory>(base);
  const TestPairPtr strong_ref = trajectory_pair(base_ptr, "base");
  const WeakStrongSeries s =
      weak_strong_series(ws, weak, *strong_ref, weight, config.solver.mu, config.solver.gamma);

  const double e0 = base.records.front().energy;
  if (delta == 0.0) {
    const double r_max = max_val(s.R);
    report.add("weakstrong.R_max", r_max);
    report.add("weakstrong.identical_pass", r_max <= 1e-13 * std::max(1.0, e0));
  } else {
    double ratio_max = 0.0;
    for (std::size_t k = 0; k < s.lhs.size(); ++k)
      if (s.rhs[k] > 0.0) ratio_max = std::max(ratio_max, s.lhs[k] / s.rhs[k]);
    report.add("weakstrong.gap_max", max_val(s.gap));
    report.add("weakstrong.lhs_over_rhs_max", ratio_max);
    report.add("weakstrong.ratio_pass", ratio_max <= 1.05);
    report.add("weakstrong.R_end", s.R.back());
    report.add("weakstrong.K_int_end", s.K_int.back());
  }

  if (write_outputs) {
    std::filesystem::path outdir(config.output.directory);
    std::filesystem::create_directories(outdir);
    std::ostringstream csv;
    csv << "t,R,lhs,rhs,gap,K_int\n";
    for (std::size_t k = 0; k < s.t.size(); ++k)
      csv << format_number(s.t[k]) << ',' << format_number(s.R[k]) << ','
          << format_number(s.lhs[k]) << ',' << format_number(s.rhs[k]) << ','
          << format_number(s.gap[k]) << ',' << format_number(s.K_int[k]) << '\n';
    write_text_file((outdir / "weak_strong.csv").string(), csv.str());
  }
  return report;
}

Report gamma_sweep(const RunConfig& config, bool write_outputs, int threads) {
  Report report;
  const std::vector<RunConfig> specs = gamma_sweep_specs(config, config.sweep.gammas);
  report.add("sweep.members", static_cast<double>(specs.size()));

  SpectralWorkspace ws(config.scenario.grid);
  const State initial = initial_state(ws, config.scenario);

  std::vector<std::function<Trajectory()>> jobs;
  for (const RunConfig& rc : specs)
    jobs.emplace_back([&ws, &initial, rc] {
      return run(ws, initial, rc.solver, rc.potential, rc.output.record_every);
    });
  std::vector<Trajectory> trajs = run_jobs(jobs, threads);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    if (trajs[i].blowup) {
      report.add("sweep.trajectory_complete", false);
      return report;
    }
    report.add("sweep.gamma_" + std::to_string(i), specs[i].solver.gamma);
    report.add("sweep.E_end_" + std::to_string(i), trajs[i].records.back().energy);
  }

  // pairwise Cauchy differences in L^inf(0,T;L^2)
  std::vector<double> cauchy_S, cauchy_v;
  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    double ds = 0.0, dv = 0.0;
    for (std::size_t k = 0; k < trajs[i].states.size(); ++k) {
      ds = std::max(
          ds, lp_norm(subtract(trajs[i].states[k].S.tensor(), trajs[i + 1].states[k].S.tensor()),
                      2.0));
      dv = std::max(dv, lp_norm(subtract(trajs[i].states[k].v, trajs[i + 1].states[k].v), 2.0));
    }
    cauchy_S.push_back(ds);
    cauchy_v.push_back(dv);
    report.add("sweep.cauchy_S_" + std::to_string(i), ds);
    report.add("sweep.cauchy_v_" + std::to_string(i), dv);
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < cauchy_S.size(); ++i)
    if (!(cauchy_S[i + 1] < cauchy_S[i])) decreasing = false;
  if (cauchy_S.size() >= 2) report.add("sweep.cauchy_decreasing", decreasing);

  // gamma = 0 relative energy forms on the smallest-gamma member
  const Trajectory& finest = trajs.back();
  RunConfig wc = specs.back();
  if (wc.diagnostics.weight_kind != RegularityWeight::Kind::TildeS &&
      wc.diagnostics.weight_kind != RegularityWeight::Kind::Ks)
    wc.diagnostics.weight_kind = RegularityWeight::Kind::Ks;
  RegularityWeight weight;
  {
    // calibrate the gamma = 0 coercivity (w_zero >= 0)
    RunConfig calib = wc;
    calib.solver.gamma = 0.0;
    weight = build_weight(ws, calib, &report);
  }
  const double e0 = finest.records.front().energy;
  for (const PairConfig& pc : config.diagnostics.pairs) {
    const TestPairPtr pair = pc.build(wc.solver);
    const GapSeries gs = relen_series(ws, finest, *pair, weight, wc.potential, wc.solver.mu,
                                      wc.solver.eta, /*gamma_form=*/0.0, wc.solver.forcing);
    const double gmax = max_val(gs.gap);
    report.add("sweep.relen0." + pair->name() + ".gap_max", gmax);
    report.add("sweep.relen0." + pair->name() + ".pass", gmax <= 0.02 * e0);
  }

  if (write_outputs) {
    std::filesystem::path outdir(config.output.directory);
    std::filesystem::create_directories(outdir);
    std::ostringstream csv;
    csv << "i,gamma,cauchy_S,cauchy_v\n";
    for (std::size_t i = 0; i + 1 < trajs.size(); ++i)
      csv << i << ',' << format_number(specs[i].solver.gamma) << ','
          << format_number(cauchy_S[i]) << ',' << format_number(cauchy_v[i]) << '\n';
    write_text_file((outdir / "gamma_sweep.csv").string(), csv.str());
  }
  return report;
}

// ---- prox oracle suite -------------------------------------------------------------

namespace {

NodeTensor random_dev3(std::uint64_t key, std::uint64_t ctr, double mag) {
  NodeTensor t{3, {}};
  for (int i = 0; i < 9; ++i) t.a[static_cast<std::size_t>(i)] = rng::normal(key, ctr + static_cast<std::uint64_t>(i));
  NodeTensor d = deviatoric_part(t);
  const double f = d.frobenius();
  return (f > 0.0 ? mag / f : 0.0) * d;
}

/// Orthonormal deviatoric direction orthogonal to d.
NodeTensor orthogonal_dir(const NodeTensor& d, std::uint64_t key) {
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    NodeTensor cand = random_dev3(key, 100 + attempt * 16, 1.0);
    const NodeTensor ortho = cand - (ddot(cand, d) / std::max(ddot(d, d), 1e-300)) * d;
    const double f = ortho.frobenius();
    if (f > 1e-6) return (1.0 / f) * ortho;
  }
  throw Error("could not build an orthogonal deviatoric direction");
}

/// Brute-force prox: exhaustive grid over the plane span{e_X, e_perp}
/// (the objective only depends on |S| and S:X, so minimizers live there),
/// three refinement passes.
NodeTensor brute_force_prox(const PotentialSpec& spec, double tau, const NodeTensor& x,
                            std::uint64_t key) {
  const double xm = x.frobenius();
  if (xm == 0.0) return NodeTensor{3, {}};
  const NodeTensor ex = (1.0 / xm) * x;
  const NodeTensor ep = orthogonal_dir(ex, key);

  const double rmax = spec.kind == PotentialSpec::Kind::YieldConstrained
                          ? spec.sigma_yield * (1.0 + 1e-12)
                          : 2.0 * xm + 1.0;
  double best_a = 0.0, best_b = 0.0;
  double lo_a = -rmax, hi_a = rmax, lo_b = -rmax, hi_b = rmax;
  double best = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 4; ++pass) {
    const int npts = 121;
    double cur_a = best_a, cur_b = best_b;
    for (int i = 0; i < npts; ++i)
      for (int j = 0; j < npts; ++j) {
        const double a = lo_a + (hi_a - lo_a) * i / (npts - 1);
        const double b = lo_b + (hi_b - lo_b) * j / (npts - 1);
        const NodeTensor s = a * ex + b * ep;
        const double val = pointwise_value(spec, s);
        if (!std::isfinite(val)) continue;
        const NodeTensor diff = s - x;
        const double f = 0.5 / tau * ddot(diff, diff) + val;
        if (f < best) {
          best = f;
          cur_a = a;
          cur_b = b;
        }
      }
    best_a = cur_a;
    best_b = cur_b;
    const double wa = (hi_a - lo_a) / (npts - 1) * 2.0;
    const double wb = (hi_b - lo_b) / (npts - 1) * 2.0;
    lo_a = best_a - wa;
    hi_a = best_a + wa;
    lo_b = best_b - wb;
    hi_b = best_b + wb;
  }
  return best_a * ex + best_b * ep;
}

/// Brute-force conjugate: sup over the same plane.
double brute_force_conjugate(const PotentialSpec& spec, const NodeTensor& g, std::uint64_t key) {
  const double gm = g.frobenius();
  if (gm == 0.0) return 0.0;
  const NodeTensor eg = (1.0 / gm) * g;
  const NodeTensor ep = orthogonal_dir(eg, key);
  const double rmax = spec.kind == PotentialSpec::Kind::YieldConstrained
                          ? spec.sigma_yield
                          : (spec.a > 0.0 ? 4.0 * gm / spec.a : 1.0);
  double best = 0.0;
  double lo_a = -rmax, hi_a = rmax, lo_b = -rmax, hi_b = rmax;
  double best_a = 0.0, best_b = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    const int npts = 121;
    double cur_a = best_a, cur_b = best_b;
    for (int i = 0; i < npts; ++i)
      for (int j = 0; j < npts; ++j) {
        const double a = lo_a + (hi_a - lo_a) * i / (npts - 1);
        const double b = lo_b + (hi_b - lo_b) * j / (npts - 1);
        const NodeTensor t = a * eg + b * ep;
        const double val = pointwise_value(spec, t);
        if (!std::isfinite(val)) continue;
        const double f = ddot(g, t) - val;
        if (f > best) {
          best = f;
          cur_a = a;
          cur_b = b;
        }
      }
    best_a = cur_a;
    best_b = cur_b;
    const double wa = (hi_a - lo_a) / (npts - 1) * 2.0;
    const double wb = (hi_b - lo_b) / (npts - 1) * 2.0;
    lo_a = best_a - wa;
    hi_a = best_a + wa;
    lo_b = best_b - wb;
    hi_b = best_b + wb;
  }
  return best;
}

}  // namespace

Report prox_selftest() {
  Report report;
  const std::uint64_t seed = 0xC0FFEE;

  const PotentialSpec specs[] = {PotentialSpec::zero(), PotentialSpec::quadratic(1.3),
                                 PotentialSpec::yield(1.0, 1.0), PotentialSpec::yield(0.0, 1.0),
                                 PotentialSpec::yield(2.0, 0.7)};
  const char* names[] = {"zero", "quadratic", "yield_a1", "yield_a0", "yield_a2"};

  double worst_prox = 0.0, worst_conj = 0.0, worst_grad = 0.0;
  for (int s = 0; s < 5; ++s) {
    const PotentialSpec& spec = specs[s];
    double wp = 0.0, wc = 0.0, wg = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::uint64_t key = rng::value(seed, static_cast<std::uint64_t>(s * 1000 + trial));
      // magnitudes across interior / boundary / exterior of the yield ball
      const double mags[] = {0.2, 0.9, 1.0, 1.1, 2.5, 4.0};
      const double mag = mags[trial % 6] *
                         (spec.kind == PotentialSpec::Kind::YieldConstrained ? spec.sigma_yield : 1.0);
      const NodeTensor x = random_dev3(key, 0, mag);
      const double tau = 0.25 + 1.5 * rng::uniform01(key, 50);

      const NodeTensor closed = prox_pointwise(spec, tau, x);
      const NodeTensor brute = brute_force_prox(spec, tau, x, key);
      wp = std::max(wp, (closed - brute).frobenius());

      const double conj_closed = conjugate_pointwise(spec, x);
      if (std::isfinite(conj_closed)) {
        const double conj_brute = brute_force_conjugate(spec, x, key);
        wc = std::max(wc, std::abs(conj_closed - conj_brute) / std::max(1.0, std::abs(conj_closed)));
      }

      // Moreau gradient vs central differences, away from the yield sphere
      const double eps = 0.3 + rng::uniform01(key, 60);
      if (spec.kind == PotentialSpec::Kind::YieldConstrained) {
        const double shrunk = x.frobenius() / (1.0 + spec.a * eps);
        if (std::abs(shrunk - spec.sigma_yield) < 0.05 * spec.sigma_yield) continue;
      }
      const NodeTensor grad = moreau_grad(spec, eps, x);
      const NodeTensor dir = random_dev3(rng::value(key, 7), 0, 1.0);
      const double h = 1e-6 * std::max(1.0, x.frobenius());
      const double f_hi = moreau_value(spec, eps, x + h * dir);
      const double f_lo = moreau_value(spec, eps, x - h * dir);
      const double fd = (f_hi - f_lo) / (2.0 * h);
      const double an = ddot(grad, dir);
      wg = std::max(wg, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    report.add(std::string("prox.") + names[s] + ".worst_prox_err", wp);
    report.add(std::string("prox.") + names[s] + ".worst_conjugate_err", wc);
    report.add(std::string("prox.") + names[s] + ".worst_moreau_grad_err", wg);
    worst_prox = std::max(worst_prox, wp);
    worst_conj = std::max(worst_conj, wc);
    worst_grad = std::max(worst_grad, wg);
  }

  report.add("prox.worst_prox_err", worst_prox);
  report.add("prox.worst_conjugate_err", worst_conj);
  report.add("prox.worst_moreau_grad_err", worst_grad);
  report.add("prox.prox_pass", worst_prox <= 1e-6);
  report.add("prox.conjugate_pass", worst_conj <= 1e-6);
  report.add("prox.moreau_grad_pass", worst_grad <= 1e-5);
  return report;
}

}  // namespace vep
