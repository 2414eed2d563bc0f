#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "vep/field.hpp"
#include "vep/spectral.hpp"

namespace vep {

/// Body force recipes with closed forms.
///   None:            f = 0
///   TgManufactured:  f(x,t) = B(t)^2/2 (sin 2x, sin 2y, 0), B(t) = A e^{-2 rate t};
///                    balances the self-advection of the decaying Taylor-Green
///                    field of amplitude A, so that field solves the momentum
///                    equation with zero stress.
struct ForcingSpec {
  enum class Kind { None, TgManufactured };
  Kind kind = Kind::None;
  double amplitude = 0.0;
  double rate = 0.0;
};

VectorField sample_forcing(const Grid& g, const ForcingSpec& f, double t);

/// Initial data recipes; random recipes are fully determined by the seed.
struct ScenarioSpec {
  enum class VInit { TaylorGreen, RandomDivFree };
  enum class SInit { Zero, ConstantDeviatoric, Modulated };

  std::string name = "scenario";
  Grid grid;

  VInit v_init = VInit::TaylorGreen;
  double v_amplitude = 1.0;
  std::uint64_t seed = 0;
  double spectral_decay = 4.0;  // random_divfree amplitude ~ |m|^-decay, > 1

  SInit s_init = SInit::Zero;
  double s_amplitude = 0.0;
  int s_mode = 1;
  std::array<double, 9> s_tensor{};  // ConstantDeviatoric value (row-major)

  ForcingSpec forcing;
};

/// 2D: A (sin x cos y, -cos x sin y); 3D analogue with zero third component.
/// Exactly divergence-free.
VectorField taylor_green(const Grid& g, double amplitude);

/// Leray projection of seeded Gaussian modes with spectral decay |m|^-decay,
/// dealiased, zero mean. Bit-reproducible for a fixed seed.
VectorField random_divfree(const SpectralWorkspace& ws, std::uint64_t seed, double decay);

/// Seeded band-limited deviatoric noise with the same spectral shaping.
DeviatoricField random_deviatoric(const SpectralWorkspace& ws, std::uint64_t seed, double decay);

/// Builds the t = 0 state from the recipes; v projected, S deviatorized.
State initial_state(const SpectralWorkspace& ws, const ScenarioSpec& spec);

struct PerturbResult {
  State state;
  /// Relative energy of the perturbed state against the original, O(delta^2).
  double relative_energy;
};

/// Adds delta-scaled divergence-free velocity noise and deviatoric stress
/// noise; output satisfies the State invariants.
PerturbResult perturb(const SpectralWorkspace& ws, const State& state, double delta,
                      std::uint64_t seed);

}  // namespace vep
