#pragma once

#include <string>
#include <vector>

#include "vep/diagnostics.hpp"
#include "vep/solver.hpp"

namespace vep {

/// Per-pair diagnostics block appended to the CSV.
struct PairColumns {
  std::string name;
  std::vector<double> relen_R;
  std::vector<double> relen_gap;
  std::vector<double> ws_gap;
  std::vector<double> K_int;
};

/// Renders the diagnostics CSV. Columns:
///   t, E, grad_v_sq, grad_S_sq, P_S, en_margin,
/// then per registered pair:
///   relen_R_<name>, relen_gap_<name>, ws_gap_<name>, K_int_<name>.
/// Numbers use shortest round-trip formatting; output is byte-deterministic.
std::string diagnostics_csv(const Trajectory& traj, const std::vector<PairColumns>& pairs);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// value -> shortest round-trip decimal string (nan/inf spelled literally).
std::string format_number(double v);

}  // namespace vep
