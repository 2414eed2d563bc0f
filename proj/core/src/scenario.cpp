#include "vep/scenario.hpp"

#include <cmath>

#include "vep/errors.hpp"
#include "vep/rng.hpp"

namespace vep {

namespace {

/// White Gaussian nodes shaped by |m|^-decay in Fourier space, dealiased,
/// zero mean. The key separates independent fields drawn from one seed.
void shaped_noise_component(const SpectralWorkspace& ws, std::uint64_t key, double decay,
                            double* out) {
  const Grid& g = ws.grid();
  const std::size_t nn = g.node_count();
  std::vector<double> white(nn);
  for (std::size_t k = 0; k < nn; ++k) white[k] = rng::normal(key, k);

  std::vector<std::complex<double>> spec(ws.spec_size());
  ws.forward(white.data(), spec.data());
  const auto& k2 = ws.k_squared();
  const auto& mask = ws.dealias_mask();
  const double k0 = kTwoPi / g.length;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (k2[i] == 0.0 || !mask[i]) {
      spec[i] = 0.0;
      continue;
    }
    const double mode_mag = std::sqrt(k2[i]) / k0;
    spec[i] *= std::pow(mode_mag, -decay);
  }
  ws.inverse(spec.data(), out);
}

}  // namespace

VectorField sample_forcing(const Grid& g, const ForcingSpec& f, double t) {
  VectorField out(g);
  if (f.kind == ForcingSpec::Kind::None || f.amplitude == 0.0) return out;
  const double b = f.amplitude * std::exp(-2.0 * f.rate * t);
  const double c = 0.5 * b * b;
  for_each_node(g, [&](std::size_t idx, double x, double y, double) {
    out.at(0, idx) = c * std::sin(2.0 * x);
    out.at(1, idx) = c * std::sin(2.0 * y);
  });
  return out;
}

VectorField taylor_green(const Grid& g, double amplitude) {
  VectorField v(g);
  for_each_node(g, [&](std::size_t idx, double x, double y, double) {
    v.at(0, idx) = amplitude * std::sin(x) * std::cos(y);
    v.at(1, idx) = -amplitude * std::cos(x) * std::sin(y);
  });
  return v;
}

VectorField random_divfree(const SpectralWorkspace& ws, std::uint64_t seed, double decay) {
  if (!(decay > 1.0)) throw InvalidArgumentError("random_divfree requires decay > 1");
  const Grid& g = ws.grid();
  VectorField v(g);
  for (int c = 0; c < g.dim; ++c)
    shaped_noise_component(ws, rng::value(seed, 0xA0 + static_cast<std::uint64_t>(c)), decay,
                           v.comp(c));
  return leray_project(ws, v);
}

DeviatoricField random_deviatoric(const SpectralWorkspace& ws, std::uint64_t seed, double decay) {
  if (!(decay > 1.0)) throw InvalidArgumentError("random_deviatoric requires decay > 1");
  const Grid& g = ws.grid();
  TensorField t(g);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      shaped_noise_component(ws, rng::value(seed, 0xB0 + static_cast<std::uint64_t>(i * g.dim + j)),
                             decay, t.comp(i, j));
  return deviatoric_part(t);
}

State initial_state(const SpectralWorkspace& ws, const ScenarioSpec& spec) {
  const Grid& g = spec.grid;
  State state;
  state.t = 0.0;

  VectorField v;
  switch (spec.v_init) {
    case ScenarioSpec::VInit::TaylorGreen:
      v = taylor_green(g, spec.v_amplitude);
      break;
    case ScenarioSpec::VInit::RandomDivFree:
      v = random_divfree(ws, spec.seed, spec.spectral_decay);
      scale_in_place(v, spec.v_amplitude);
      break;
  }
  state.v = leray_project(ws, dealias(ws, v));

  TensorField s(g);
  switch (spec.s_init) {
    case ScenarioSpec::SInit::Zero:
      break;
    case ScenarioSpec::SInit::ConstantDeviatoric: {
      NodeTensor t0{g.dim, spec.s_tensor};
      const NodeTensor d0 = deviatoric_part(t0);
      for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j) {
          double* c = s.comp(i, j);
          for (std::size_t k = 0; k < s.nodes(); ++k) c[k] = spec.s_amplitude * d0(i, j);
        }
      break;
    }
    case ScenarioSpec::SInit::Modulated: {
      // amplitude sin(mode*x) on the shear direction e1 x e2 + e2 x e1
      for_each_node(g, [&](std::size_t idx, double x, double, double) {
        const double val = spec.s_amplitude * std::sin(spec.s_mode * x);
        s.at(0, 1, idx) = val;
        s.at(1, 0, idx) = val;
      });
      break;
    }
  }
  state.S = deviatoric_part(dealias(ws, s));
  return state;
}

PerturbResult perturb(const SpectralWorkspace& ws, const State& state, double delta,
                      std::uint64_t seed) {
  if (delta < 0.0) throw InvalidArgumentError("perturb requires delta >= 0");
  PerturbResult out;
  out.state = state;
  if (delta == 0.0) {
    out.relative_energy = 0.0;
    return out;
  }

  const VectorField nv = random_divfree(ws, rng::value(seed, 1), 3.0);
  const DeviatoricField ns = random_deviatoric(ws, rng::value(seed, 2), 3.0);

  VectorField v = state.v;
  axpy_in_place(v, delta, nv);
  out.state.v = leray_project(ws, v);

  TensorField s = state.S.tensor();
  axpy_in_place(s, delta, ns.tensor());
  out.state.S = deviatoric_part(s);

  const VectorField dv = subtract(out.state.v, state.v);
  const TensorField dS = subtract(out.state.S.tensor(), state.S.tensor());
  const double nv2 = inner_product_l2(dv, dv);
  const double ns2 = inner_product_l2(dS, dS);
  out.relative_energy = 0.5 * nv2 + 0.5 * ns2;
  return out;
}

}  // namespace vep
