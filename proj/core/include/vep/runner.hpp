#pragma once

#include <string>
#include <vector>

#include "vep/config.hpp"

namespace vep {

/// Line-oriented machine-parseable report: "key=value" per line, insertion
/// order preserved.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, bool pass);
  std::string text() const;
  bool all_passed() const { return failures_ == 0; }
  int failures() const { return failures_; }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  int failures_ = 0;
};

struct RunArtifacts {
  Trajectory trajectory;
  std::string csv;          // diagnostics CSV text
  double E0 = 0.0;
  RegularityWeight weight;  // the (possibly calibrated) weight actually used
};

/// Executes one simulation with per-pair diagnostics columns and returns the
/// artifacts; writes CSV + checkpoints under config.output when write_outputs.
RunArtifacts simulate(const RunConfig& config, bool write_outputs, Report* report = nullptr);

/// kind in {energy, varineq, relen}; evaluates the matching inequality gaps,
/// one pass/fail line per check.
Report verify(const RunConfig& config, const std::string& kind, bool write_outputs);

/// Base vs delta-perturbed run; reports the stability gap, max LHS/RHS ratio
/// and the relative energies over time.
Report weak_strong_experiment(const RunConfig& config, double delta, bool write_outputs,
                              int threads = 1);

/// Runs the gamma sweep, reports pairwise Cauchy differences and the
/// gamma = 0 form relative-energy gaps of the smallest-gamma member.
Report gamma_sweep(const RunConfig& config, bool write_outputs, int threads = 1);

/// Brute-force oracle suite for the proximal machinery (closed-form prox vs
/// constrained minimization, conjugate vs ball supremum, Moreau gradient vs
/// central differences). Fails when any oracle error exceeds its bound.
Report prox_selftest();

}  // namespace vep
