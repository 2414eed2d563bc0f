#pragma once

#include <map>
#include <string>
#include <vector>

#include "vep/diagnostics.hpp"
#include "vep/potential.hpp"
#include "vep/scenario.hpp"
#include "vep/solver.hpp"

namespace vep {

/// One registered comparison pair from the [diagnostics] section.
struct PairConfig {
  std::string kind;  // zero | corotational | tg_decay | traveling_wave
  double p1 = 0.0, p2 = 0.0;
  int mode = 1;

  TestPairPtr build(const SolverConfig& solver) const;
};

struct DiagnosticsConfig {
  std::vector<PairConfig> pairs;
  RegularityWeight::Kind weight_kind = RegularityWeight::Kind::Zero;
  bool calibrate = true;   // estimate C by sampled coercivity
  double weight_C = 0.0;   // used when calibrate == false
  double weight_r = 6.0;   // velocity Serrin exponent (weakstrong, ks)
  double weight_p = 6.0;   // stress Serrin exponent (weakstrong)
  int calib_samples = 48;
  std::uint64_t calib_seed = 2026;
};

struct OutputConfig {
  std::string directory = "out";
  int record_every = 1;
  int checkpoint_every = 0;  // 0 disables checkpoints
};

struct SweepConfig {
  std::vector<double> gammas;  // positive, strictly decreasing
};

struct WeakStrongConfig {
  double delta = 1e-3;
  std::uint64_t noise_seed = 77;
};

/// Full run description: everything a command needs, no hidden state.
struct RunConfig {
  ScenarioSpec scenario;
  SolverConfig solver;
  PotentialSpec potential;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  SweepConfig sweep;
  WeakStrongConfig weak_strong;
};

/// Parses the INI-style config text ([section], key = value). Unknown
/// sections or keys are hard errors (ConfigError), as are malformed values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical serialization; parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const RunConfig& config);

/// Identical copies of `base` with gamma replaced by each entry.
/// The list must be positive and strictly decreasing (OrderingError).
std::vector<RunConfig> gamma_sweep_specs(const RunConfig& base, const std::vector<double>& gammas);

}  // namespace vep
