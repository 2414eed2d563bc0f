#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vep/solver.hpp"
#include "vep/spectral.hpp"

namespace vep {

/// All comparison-pair data sampled at one time: fields, time derivatives,
/// space derivatives. grad_S[l] = d_l S~; lap_v is supplied so the strong-form
/// momentum residual needs no discrete second derivatives of analytic pairs.
struct PairSample {
  double t = 0.0;
  VectorField v;
  TensorField S;
  VectorField dt_v;
  TensorField dt_S;
  TensorField grad_v;                // (grad v~)_{jk} = d_k v~_j
  std::vector<TensorField> grad_S;   // per derivative axis
  TensorField lap_S;
  VectorField lap_v;
};

/// Analytic comparison pair (v~, S~) with closed-form derivatives, sampled
/// onto a grid at any time. Implementations must keep v~ divergence-free
/// (1e-10) and S~ symmetric deviatoric.
class TestPair {
 public:
  virtual ~TestPair() = default;
  virtual std::string name() const = 0;
  virtual PairSample sample(const SpectralWorkspace& ws, double t) const = 0;
};

using TestPairPtr = std::shared_ptr<const TestPair>;

/// The pair (0, O); reduces every relative-energy statement to the plain
/// energy statement.
TestPairPtr zero_pair();

/// Steady cellular rotation v~ = omega (-sin x cos y, cos x sin y, 0) with a
/// stress field rotating with the local spin, so the objective transport rate
/// of S~ vanishes identically:  dt S~ + (v~.grad)S~ + S~W~ - W~S~ = 0.
/// ||S~(t)||_{L2} is constant in time. omega = 0 gives a static pair.
TestPairPtr corotational_pair(double omega, double s_amp);

/// Decaying Taylor-Green velocity A e^{-2 mu t}(sin x cos y, -cos x sin y, 0)
/// with a decaying shear stress B e^{-rate_s t} sin x (e1 x e2 + e2 x e1).
TestPairPtr tg_decay_pair(double a, double mu, double s_amp, double rate_s);

/// Constant drift c = (c1, c2, 0) with a transported wave
/// S~ = B sin(m (x - c1 t)) (e1 x e2 + e2 x e1); transport-exact, W~ = 0.
TestPairPtr traveling_wave_pair(double c1, double c2, double s_amp, int mode);

/// Comparison pair backed by a recorded trajectory. Time derivatives are
/// central differences of the records, space derivatives spectral; used for
/// self-tests and weak-strong comparisons where either no derivative is
/// needed or its factor vanishes.
TestPairPtr trajectory_pair(std::shared_ptr<const Trajectory> traj, std::string name);

/// Time-independent pair from frozen fields (spectral derivatives, zero time
/// derivatives); the sampling workhorse for weight calibration.
TestPairPtr frozen_pair(VectorField v, DeviatoricField s, std::string name);

struct PairValidation {
  double div_v = 0.0;             // ||div v~||_inf at t
  double deviatoric_defect = 0.0; // worst symmetry/trace violation of S~
  double dt_defect = 0.0;         // max rel. error of dt fields vs central FD
  bool ok = false;
};

/// One-shot validation of the pair invariants at time t (FD step 1e-4,
/// relative tolerance 1e-6 on the listed time derivatives).
PairValidation validate_pair(const SpectralWorkspace& ws, const TestPair& pair, double t);

}  // namespace vep
