#include "vep/pairs.hpp"

#include <cmath>
#include <utility>

#include "vep/diagnostics.hpp"
#include "vep/errors.hpp"

namespace vep {

namespace {

PairSample empty_sample(const Grid& g, double t) {
  PairSample p;
  p.t = t;
  p.v = VectorField(g);
  p.S = TensorField(g);
  p.dt_v = VectorField(g);
  p.dt_S = TensorField(g);
  p.grad_v = TensorField(g);
  p.grad_S.assign(static_cast<std::size_t>(g.dim), TensorField(g));
  p.lap_S = TensorField(g);
  p.lap_v = VectorField(g);
  return p;
}

/// Fill space derivatives spectrally from the sampled v and S.
void spectral_derivatives(const SpectralWorkspace& ws, PairSample& p) {
  p.grad_v = gradient(ws, p.v);
  p.grad_S = gradient(ws, p.S);
  p.lap_S = laplacian(ws, p.S);
  p.lap_v = laplacian(ws, p.v);
}

class ZeroPair final : public TestPair {
 public:
  std::string name() const override { return "zero"; }
  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    return empty_sample(ws.grid(), t);
  }
};

/// Steady cellular rotation with co-rotating stress: the objective transport
/// rate of S~ vanishes identically. theta(x,t) = -t*omega*sin(x)sin(y) solves
/// d_t theta + v~.grad theta + w = 0 for the local spin w = omega sin(x)sin(y).
class CorotationalPair final : public TestPair {
 public:
  CorotationalPair(double omega, double s_amp) : omega_(omega), s_amp_(s_amp) {}

  std::string name() const override { return "corotational"; }

  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    const Grid& g = ws.grid();
    PairSample p = empty_sample(g, t);
    const double om = omega_, b = s_amp_;

    for_each_node(g, [&](std::size_t idx, double x, double y, double) {
      const double sx = std::sin(x), cx = std::cos(x);
      const double sy = std::sin(y), cy = std::cos(y);
      const double psi = sx * sy;

      p.v.at(0, idx) = -om * sx * cy;
      p.v.at(1, idx) = om * cx * sy;
      p.lap_v.at(0, idx) = 2.0 * om * sx * cy;
      p.lap_v.at(1, idx) = -2.0 * om * cx * sy;

      p.grad_v.at(0, 0, idx) = -om * cx * cy;
      p.grad_v.at(0, 1, idx) = om * sx * sy;
      p.grad_v.at(1, 0, idx) = -om * sx * sy;
      p.grad_v.at(1, 1, idx) = om * cx * cy;

      const double theta = -t * om * psi;
      const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
      const double th_x = -t * om * cx * sy;
      const double th_y = -t * om * sx * cy;
      const double th_t = -om * psi;
      const double grad_th_sq = th_x * th_x + th_y * th_y;
      const double lap_th = 2.0 * t * om * psi;

      const double dc[2] = {-2.0 * s * th_x, -2.0 * s * th_y};
      const double ds[2] = {2.0 * c * th_x, 2.0 * c * th_y};
      const double lap_c = -4.0 * c * grad_th_sq - 2.0 * s * lap_th;
      const double lap_s = -4.0 * s * grad_th_sq + 2.0 * c * lap_th;

      p.S.at(0, 0, idx) = b * c;
      p.S.at(1, 1, idx) = -b * c;
      p.S.at(0, 1, idx) = b * s;
      p.S.at(1, 0, idx) = b * s;

      p.dt_S.at(0, 0, idx) = -2.0 * b * s * th_t;
      p.dt_S.at(1, 1, idx) = 2.0 * b * s * th_t;
      p.dt_S.at(0, 1, idx) = 2.0 * b * c * th_t;
      p.dt_S.at(1, 0, idx) = 2.0 * b * c * th_t;

      for (int l = 0; l < 2; ++l) {
        p.grad_S[static_cast<std::size_t>(l)].at(0, 0, idx) = b * dc[l];
        p.grad_S[static_cast<std::size_t>(l)].at(1, 1, idx) = -b * dc[l];
        p.grad_S[static_cast<std::size_t>(l)].at(0, 1, idx) = b * ds[l];
        p.grad_S[static_cast<std::size_t>(l)].at(1, 0, idx) = b * ds[l];
      }
      p.lap_S.at(0, 0, idx) = b * lap_c;
      p.lap_S.at(1, 1, idx) = -b * lap_c;
      p.lap_S.at(0, 1, idx) = b * lap_s;
      p.lap_S.at(1, 0, idx) = b * lap_s;
    });
    return p;
  }

 private:
  double omega_, s_amp_;
};

/// Decaying Taylor-Green velocity with a decaying shear-stress wave.
class TgDecayPair final : public TestPair {
 public:
  TgDecayPair(double a, double mu, double s_amp, double rate_s)
      : a_(a), mu_(mu), s_amp_(s_amp), rate_s_(rate_s) {}

  std::string name() const override { return "tg_decay"; }

  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    const Grid& g = ws.grid();
    PairSample p = empty_sample(g, t);
    const double bv = a_ * std::exp(-2.0 * mu_ * t);
    const double bs = s_amp_ * std::exp(-rate_s_ * t);

    for_each_node(g, [&](std::size_t idx, double x, double y, double) {
      const double sx = std::sin(x), cx = std::cos(x);
      const double sy = std::sin(y), cy = std::cos(y);

      p.v.at(0, idx) = bv * sx * cy;
      p.v.at(1, idx) = -bv * cx * sy;
      p.dt_v.at(0, idx) = -2.0 * mu_ * bv * sx * cy;
      p.dt_v.at(1, idx) = 2.0 * mu_ * bv * cx * sy;
      p.lap_v.at(0, idx) = -2.0 * bv * sx * cy;
      p.lap_v.at(1, idx) = 2.0 * bv * cx * sy;

      p.grad_v.at(0, 0, idx) = bv * cx * cy;
      p.grad_v.at(0, 1, idx) = -bv * sx * sy;
      p.grad_v.at(1, 0, idx) = bv * sx * sy;
      p.grad_v.at(1, 1, idx) = -bv * cx * cy;

      p.S.at(0, 1, idx) = bs * sx;
      p.S.at(1, 0, idx) = bs * sx;
      p.dt_S.at(0, 1, idx) = -rate_s_ * bs * sx;
      p.dt_S.at(1, 0, idx) = -rate_s_ * bs * sx;
      p.grad_S[0].at(0, 1, idx) = bs * cx;
      p.grad_S[0].at(1, 0, idx) = bs * cx;
      p.lap_S.at(0, 1, idx) = -bs * sx;
      p.lap_S.at(1, 0, idx) = -bs * sx;
    });
    return p;
  }

 private:
  double a_, mu_, s_amp_, rate_s_;
};

/// Constant drift with a transported stress wave; transport-exact, W~ = 0.
class TravelingWavePair final : public TestPair {
 public:
  TravelingWavePair(double c1, double c2, double s_amp, int mode)
      : c1_(c1), c2_(c2), s_amp_(s_amp), mode_(mode) {}

  std::string name() const override { return "traveling_wave"; }

  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    const Grid& g = ws.grid();
    PairSample p = empty_sample(g, t);
    const double m = static_cast<double>(mode_);

    for_each_node(g, [&](std::size_t idx, double x, double, double) {
      p.v.at(0, idx) = c1_;
      p.v.at(1, idx) = c2_;
      const double phase = m * (x - c1_ * t);
      const double sv = s_amp_ * std::sin(phase);
      const double cv = s_amp_ * std::cos(phase);
      p.S.at(0, 1, idx) = sv;
      p.S.at(1, 0, idx) = sv;
      p.dt_S.at(0, 1, idx) = -m * c1_ * cv;
      p.dt_S.at(1, 0, idx) = -m * c1_ * cv;
      p.grad_S[0].at(0, 1, idx) = m * cv;
      p.grad_S[0].at(1, 0, idx) = m * cv;
      p.lap_S.at(0, 1, idx) = -m * m * sv;
      p.lap_S.at(1, 0, idx) = -m * m * sv;
    });
    return p;
  }

 private:
  double c1_, c2_, s_amp_;
  int mode_;
};

class TrajectoryPair final : public TestPair {
 public:
  TrajectoryPair(std::shared_ptr<const Trajectory> traj, std::string name)
      : traj_(std::move(traj)), name_(std::move(name)) {
    if (traj_->states.empty()) throw InsufficientDataError("trajectory pair needs records");
  }

  std::string name() const override { return name_; }

  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    const std::size_t k = traj_->index_at(t);
    const State& st = traj_->states[k];
    PairSample p = empty_sample(ws.grid(), t);
    p.v = st.v;
    p.S = st.S.tensor();
    // central differences of the records; one-sided at the ends
    const double dt = traj_->record_dt;
    const std::size_t last = traj_->states.size() - 1;
    if (last > 0 && dt > 0.0) {
      const std::size_t lo = (k == 0) ? 0 : k - 1;
      const std::size_t hi = (k == last) ? last : k + 1;
      const double span = (static_cast<double>(hi) - static_cast<double>(lo)) * dt;
      p.dt_v = subtract(traj_->states[hi].v, traj_->states[lo].v);
      scale_in_place(p.dt_v, 1.0 / span);
      p.dt_S = subtract(traj_->states[hi].S.tensor(), traj_->states[lo].S.tensor());
      scale_in_place(p.dt_S, 1.0 / span);
    }
    spectral_derivatives(ws, p);
    return p;
  }

 private:
  std::shared_ptr<const Trajectory> traj_;
  std::string name_;
};

class FrozenPair final : public TestPair {
 public:
  FrozenPair(VectorField v, DeviatoricField s, std::string name)
      : v_(std::move(v)), s_(std::move(s)), name_(std::move(name)) {}

  std::string name() const override { return name_; }

  PairSample sample(const SpectralWorkspace& ws, double t) const override {
    PairSample p = empty_sample(ws.grid(), t);
    p.v = v_;
    p.S = s_.tensor();
    spectral_derivatives(ws, p);
    return p;
  }

 private:
  VectorField v_;
  DeviatoricField s_;
  std::string name_;
};

}  // namespace

TestPairPtr zero_pair() { return std::make_shared<ZeroPair>(); }

TestPairPtr corotational_pair(double omega, double s_amp) {
  return std::make_shared<CorotationalPair>(omega, s_amp);
}

TestPairPtr tg_decay_pair(double a, double mu, double s_amp, double rate_s) {
  return std::make_shared<TgDecayPair>(a, mu, s_amp, rate_s);
}

TestPairPtr traveling_wave_pair(double c1, double c2, double s_amp, int mode) {
  return std::make_shared<TravelingWavePair>(c1, c2, s_amp, mode);
}

TestPairPtr trajectory_pair(std::shared_ptr<const Trajectory> traj, std::string name) {
  return std::make_shared<TrajectoryPair>(std::move(traj), std::move(name));
}

TestPairPtr frozen_pair(VectorField v, DeviatoricField s, std::string name) {
  return std::make_shared<FrozenPair>(std::move(v), std::move(s), std::move(name));
}

PairValidation validate_pair(const SpectralWorkspace& ws, const TestPair& pair, double t) {
  PairValidation out;
  const PairSample p = pair.sample(ws, t);
  out.div_v = lp_norm(divergence(ws, p.v), std::numeric_limits<double>::infinity());
  out.deviatoric_defect = deviatoric_defect(p.S);

  const double delta = 1e-4;
  const PairSample lo = pair.sample(ws, t - delta);
  const PairSample hi = pair.sample(ws, t + delta);
  VectorField fd_v = subtract(hi.v, lo.v);
  scale_in_place(fd_v, 0.5 / delta);
  TensorField fd_S = subtract(hi.S, lo.S);
  scale_in_place(fd_S, 0.5 / delta);

  const double scale_v = std::max(lp_norm(p.dt_v, 2.0), 1e-12);
  const double scale_S = std::max(lp_norm(p.dt_S, 2.0), 1e-12);
  const double err_v = lp_norm(subtract(fd_v, p.dt_v), 2.0) / scale_v;
  const double err_S = lp_norm(subtract(fd_S, p.dt_S), 2.0) / scale_S;
  out.dt_defect = std::max(err_v, err_S);

  out.ok = out.div_v <= 1e-10 * (1.0 + lp_norm(p.v, std::numeric_limits<double>::infinity())) &&
           out.deviatoric_defect <= 1e-12 && out.dt_defect <= 1e-6;
  return out;
}

}  // namespace vep
