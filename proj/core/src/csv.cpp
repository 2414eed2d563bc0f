#include "vep/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vep/errors.hpp"

namespace vep {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string diagnostics_csv(const Trajectory& traj, const std::vector<PairColumns>& pairs) {
  std::ostringstream out;
  out << "t,E,grad_v_sq,grad_S_sq,P_S,en_margin";
  for (const PairColumns& p : pairs)
    out << ",relen_R_" << p.name << ",relen_gap_" << p.name << ",ws_gap_" << p.name << ",K_int_"
        << p.name;
  out << '\n';

  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const DiagnosticsRecord& r = traj.records[k];
    out << format_number(r.t) << ',' << format_number(r.energy) << ','
        << format_number(r.grad_v_sq) << ',' << format_number(r.grad_S_sq) << ','
        << format_number(r.potential_value) << ',' << format_number(r.en_margin);
    for (const PairColumns& p : pairs)
      out << ',' << format_number(p.relen_R[k]) << ',' << format_number(p.relen_gap[k]) << ','
          << format_number(p.ws_gap[k]) << ',' << format_number(p.K_int[k]);
    out << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vep
