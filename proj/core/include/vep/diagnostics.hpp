#pragma once

#include <cstdint>
#include <vector>

#include "vep/pairs.hpp"
#include "vep/potential.hpp"
#include "vep/solver.hpp"

namespace vep {

/// Regularity weight K(v~, S~): the nonnegative functional whose exponential
/// integral appears as the Gronwall factor in the relative energy inequality.
/// K(0, O) = 0 for every variant.
///
///   Zero:       0
///   WeakStrong: C (||v~||_{L^r}^s + ||S~||_{L^p}^q + ||S~||_{L^p}^2),
///               2/s + 3/r = 1, 2/q + 3/p = 1
///   TildeS:     C (||S~||_{L^inf}^2 + ||grad S~||_{L^3}^2)
///   Ks:         C (||v~||_{L^r}^s + ||S~||_{L^inf}^2 + ||grad S~||_{L^3}^2)
struct RegularityWeight {
  enum class Kind { Zero, WeakStrong, TildeS, Ks };

  Kind kind = Kind::Zero;
  double C = 0.0;
  double r = 0.0, s = 0.0;  // velocity exponents (WeakStrong, Ks)
  double p = 0.0, q = 0.0;  // stress exponents (WeakStrong)

  static RegularityWeight zero() { return {}; }
  static RegularityWeight weak_strong(double C, double r, double p);
  static RegularityWeight tilde_s(double C);
  static RegularityWeight ks(double C, double r);

  RegularityWeight with_constant(double c) const;
};

/// s with 2/s + 3/r = 1, i.e. s = 2r/(r-3); requires r > 3.
double serrin_conjugate(double r);

/// Total quadratic energy E = 1/2||v||^2 + 1/2||S||^2.
double energy(const State& state);

/// R(v,S | v~,S~) = 1/2||v - v~||^2 + 1/2||S - S~||^2; zero iff the fields
/// coincide nodewise.
double relative_energy(const State& state, const PairSample& pair);

/// K evaluated on one pair sample with discrete L^p norms.
double k_eval(const RegularityWeight& w, const PairSample& pair);

/// Strong-form momentum residual of the pair:
///   dt v~ + (v~.grad)v~ - Div(eta S~ + 2 mu sym grad v~) - f,
/// with Div(2 sym grad v~) = lap v~ for divergence-free fields on the torus.
VectorField a1_apply(const SpectralWorkspace& ws, const PairSample& pair, double mu, double eta,
                     const ForcingSpec& f);

/// Strong-form stress residual of the pair:
///   dt S~ + (v~.grad)S~ + S~W~ - W~S~ - gamma lap S~ - eta sym grad v~.
TensorField a2_apply(const PairSample& pair, double gamma, double eta);

/// Relative dissipation functional for gamma >= 0 (uses grad S of the state):
///   mu||grad dv||^2 + gamma||grad dS||^2 - int (dv.grad dv).v~
///   - int (dv.grad dS):S~ - int (dS (grad dv)_skw - (grad dv)_skw dS):S~
///   + K R,   dv = v - v~, dS = S - S~.
double w_gamma(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
               const RegularityWeight& weight, double mu, double gamma);

/// Integrated-by-parts variant that never touches grad S of the state:
///   mu||grad dv||^2 - int (dv.grad dv).v~ + int (dS x dv) . grad S~
///   - int (dS (grad dv)_skw - (grad dv)_skw dS):S~ + K R.
double w_zero(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
              const RegularityWeight& weight, double mu);

/// Sum of the absolute values of the individual terms entering w_zero /
/// w_gamma; the natural magnitude scale for their tolerance checks.
double w_zero_scale(const SpectralWorkspace& ws, const State& state, const PairSample& pair,
                    const RegularityWeight& weight, double mu);

/// exp( trapezoid of K(pair(tau)) over [s,t] at spacing dt ). Requires s <= t.
double exp_weight(const SpectralWorkspace& ws, const RegularityWeight& weight,
                  const TestPair& pair, double s, double t, double dt);

// ---- trajectory-level functionals -------------------------------------------
//
// All time quadrature is trapezoidal on the record grid; the exponential
// weights use the same grid.

/// Signed residual of the energy-dissipation balance at record time t:
///   E(t) + int_0^t [ mu||grad v||^2 + <dP(S),S> + gamma||grad S||^2 ]
///   - E(0) - int_0^t <f, v>,
/// with <dP(S),S> realized by the recorded prox subgradient pairing.
double energy_balance_residual(const Trajectory& traj, const SolverConfig& config, double t);

/// RHS - LHS of the total energy-dissipation inequality at record time t;
/// valid runs give margin >= -tol.
double energy_inequality_margin(const Trajectory& traj, const SolverConfig& config, double t);

/// RHS - LHS of the partial stress energy inequality at record time t:
///   1/2||S0||^2 + int eta <sym grad v, S> - 1/2||S(t)||^2
///   - int (gamma||grad S||^2 + P(S)).
double stress_energy_margin(const Trajectory& traj, const SolverConfig& config, double t);

/// Whole-series variants (one value per record, same quadrature).
std::vector<double> energy_margin_series(const Trajectory& traj, const SolverConfig& config);
std::vector<double> stress_margin_series(const Trajectory& traj, const SolverConfig& config);
std::vector<double> balance_residual_series(const Trajectory& traj, const SolverConfig& config);

/// psi = ||grad v||^2 + (gamma/2)||grad S||^2 + P(S) + 1, the strong-solution
/// monitor; +inf when S is infeasible.
double strong_monitor(const SpectralWorkspace& ws, const State& state, double gamma,
                      const PotentialSpec& potential);

/// Per-record series of one relative-energy evaluation.
struct GapSeries {
  std::vector<double> t;
  std::vector<double> R;      // relative energy at each record
  std::vector<double> gap;    // LHS - RHS of the inequality up to each record
  std::vector<double> K_int;  // int_0^t K
};

/// Relative energy inequality gap (LHS - RHS):
///   R(t) + int_0^t [ W + P(S) - P(S~) + <A(pair), (v - v~, S - S~)> ] e^{int_s^t K}
///   - R(0) e^{int_0^t K}.
/// gamma_form > 0 selects the W/A forms, gamma_form = 0 the W0/A0 forms
/// (grad S of the state never used). A pair with P(S~) = +inf at any record
/// yields gap = -inf (inequality trivially true; flagged by the caller).
GapSeries relen_series(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                       const RegularityWeight& weight, const PotentialSpec& potential, double mu,
                       double eta, double gamma_form, const ForcingSpec& f);

double relen_gap(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                 const RegularityWeight& weight, const PotentialSpec& potential, double mu,
                 double eta, double gamma_form, const ForcingSpec& f, double t);

/// Evolutionary variational inequality gap (LHS - RHS) for the stress
/// component at record time t. For gamma_form = 0 the advective term uses the
/// integrated-by-parts form consistent with W0.
GapSeries varineq_series(const SpectralWorkspace& ws, const Trajectory& traj,
                         const TestPair& pair, const PotentialSpec& potential, double gamma_form,
                         double eta);

double varineq_gap(const SpectralWorkspace& ws, const Trajectory& traj, const TestPair& pair,
                   const PotentialSpec& potential, double gamma_form, double eta, double t);

/// Weak-strong stability gap (LHS - RHS):
///   R(t) + int_0^t [ (mu/2)||grad dv||^2 + (gamma/2)||grad dS||^2 ] e^{int_s^t K}
///   - R(0) e^{int_0^t K},
/// where the weight is evaluated on the strong reference.
struct WeakStrongSeries {
  std::vector<double> t;
  std::vector<double> R;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> gap;
  std::vector<double> K_int;
};

WeakStrongSeries weak_strong_series(const SpectralWorkspace& ws, const Trajectory& weak,
                                    const TestPair& strong_ref, const RegularityWeight& weight,
                                    double mu, double gamma);

double weak_strong_gap(const SpectralWorkspace& ws, const Trajectory& weak,
                       const TestPair& strong_ref, const RegularityWeight& weight, double mu,
                       double gamma, double t);

/// Consistency check of the type-monotonicity statement: requires
/// k_eval(weightK) <= k_eval(weightL) at every record (OrderingError names the
/// first violating time otherwise), then reports whether
/// relen_gap <= tol under weightK implies the same under weightL.
bool monotonicity_check(const SpectralWorkspace& ws, const Trajectory& traj,
                        const RegularityWeight& weightK, const RegularityWeight& weightL,
                        const TestPair& pair, const PotentialSpec& potential, double mu,
                        double eta, double gamma_form, const ForcingSpec& f, double t,
                        double tol);

// ---- weight calibration ------------------------------------------------------

struct CalibrationResult {
  double C = 0.0;       // smallest admissible constant times the safety factor
  double safety = 2.0;
  int samples = 0;
};

/// Estimates the smallest C such that the sampled coercivity holds over
/// `samples` random (state, pair) draws, then multiplies by the safety factor:
///   WeakStrong: w_gamma >= (mu/2)||grad dv||^2 + (gamma/2)||grad dS||^2
///   TildeS/Ks:  w_zero  >= 0
CalibrationResult calibrate_weight(const SpectralWorkspace& ws, const RegularityWeight& base,
                                   double mu, double gamma, int samples, std::uint64_t seed,
                                   double safety = 2.0);

/// Random band-limited (state, pair) draw used by calibration and its tests.
struct CoercivitySample {
  State state;
  VectorField pair_v;
  DeviatoricField pair_S;
};
CoercivitySample coercivity_sample(const SpectralWorkspace& ws, std::uint64_t seed,
                                   std::uint64_t index);

}  // namespace vep
