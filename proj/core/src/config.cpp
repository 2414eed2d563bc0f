#include "vep/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "vep/csv.hpp"
#include "vep/errors.hpp"

namespace vep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

using Section = std::map<std::string, std::string>;
using Ini = std::map<std::string, Section>;

Ini parse_ini(const std::string& text) {
  Ini ini;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section");
      section = trim(t.substr(1, t.size() - 2));
      ini[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (ini[section].count(key))
      throw ConfigError("duplicate key " + section + "." + key);
    ini[section][key] = value;
  }
  return ini;
}

/// Pops typed values out of one section; leftovers are hard errors.
class Reader {
 public:
  Reader(Ini& ini, std::string name) : name_(std::move(name)) {
    auto it = ini.find(name_);
    if (it != ini.end()) {
      section_ = std::move(it->second);
      ini.erase(it);
    }
  }

  ~Reader() = default;

  bool has(const std::string& key) const { return section_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = section_.find(key);
    if (it == section_.end()) return fallback;
    const std::string v = it->second;
    section_.erase(it);
    return v;
  }

  double num(const std::string& key, double fallback) {
    auto it = section_.find(key);
    if (it == section_.end()) return fallback;
    const double v = to_num(it->second, key);
    section_.erase(it);
    return v;
  }

  int integer(const std::string& key, int fallback) {
    const double v = num(key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError(name_ + "." + key + " must be an integer");
    return i;
  }

  std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) {
    auto it = section_.find(key);
    if (it == section_.end()) return fallback;
    std::uint64_t v = 0;
    const std::string s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError(name_ + "." + key + " must be a nonnegative integer");
    section_.erase(it);
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const std::string v = str(key, fallback ? "true" : "false");
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(name_ + "." + key + " must be true or false");
  }

  std::vector<double> num_list(const std::string& key) {
    std::vector<double> out;
    const std::string v = str(key, "");
    if (v.empty()) return out;
    for (const std::string& item : split(v, ','))
      if (!item.empty()) out.push_back(to_num(item, key));
    return out;
  }

  void finish() const {
    if (!section_.empty())
      throw ConfigError("unknown key " + name_ + "." + section_.begin()->first);
  }

 private:
  double to_num(const std::string& s, const std::string& key) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(name_ + "." + key + ": cannot parse number '" + s + "'");
    }
  }

  std::string name_;
  Section section_;
};

PairConfig parse_pair_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  PairConfig p;
  p.kind = parts[0];
  const auto getd = [&](std::size_t i, double fallback) {
    if (i >= parts.size() || parts[i].empty()) return fallback;
    return std::stod(parts[i]);
  };
  if (p.kind == "zero") {
    if (parts.size() > 1) throw ConfigError("pair 'zero' takes no parameters");
  } else if (p.kind == "corotational") {
    p.p1 = getd(1, 0.5);  // omega
    p.p2 = getd(2, 0.3);  // stress amplitude
  } else if (p.kind == "tg_decay") {
    p.p1 = getd(1, 0.5);  // velocity amplitude
    p.p2 = getd(2, 0.3);  // stress amplitude
  } else if (p.kind == "traveling_wave") {
    p.p1 = getd(1, 0.4);  // drift speed c1
    p.p2 = getd(2, 0.3);  // stress amplitude
    p.mode = static_cast<int>(getd(3, 1));
  } else {
    throw ConfigError("unknown pair kind '" + p.kind + "'");
  }
  return p;
}

std::string pair_spec_string(const PairConfig& p) {
  if (p.kind == "zero") return p.kind;
  std::string s = p.kind + ":" + format_number(p.p1) + ":" + format_number(p.p2);
  if (p.kind == "traveling_wave") s += ":" + std::to_string(p.mode);
  return s;
}

std::string weight_kind_string(RegularityWeight::Kind k) {
  switch (k) {
    case RegularityWeight::Kind::Zero: return "zero";
    case RegularityWeight::Kind::WeakStrong: return "weakstrong";
    case RegularityWeight::Kind::TildeS: return "tildes";
    case RegularityWeight::Kind::Ks: return "ks";
  }
  return "zero";
}

}  // namespace

TestPairPtr PairConfig::build(const SolverConfig& solver) const {
  if (kind == "zero") return zero_pair();
  if (kind == "corotational") return corotational_pair(p1, p2);
  if (kind == "tg_decay") return tg_decay_pair(p1, solver.mu, p2, solver.mu);
  if (kind == "traveling_wave") return traveling_wave_pair(p1, 0.0, p2, mode);
  throw ConfigError("unknown pair kind '" + kind + "'");
}

RunConfig parse_config(const std::string& text) {
  Ini ini = parse_ini(text);
  RunConfig c;

  {
    Reader r(ini, "grid");
    const int dim = r.integer("dim", 2);
    const int n = r.integer("n", 64);
    const double length = r.num("length", kTwoPi);
    c.scenario.grid = make_grid(dim, n, length);
    r.finish();
  }
  {
    Reader r(ini, "solver");
    c.solver.mu = r.num("mu", 1.0);
    c.solver.eta = r.num("eta", 0.0);
    c.solver.gamma = r.num("gamma", 0.0);
    c.solver.dt = r.num("dt", 1e-3);
    c.solver.t_end = r.num("t_end", 1.0);
    c.solver.cfl_safety = r.num("cfl_safety", 0.5);
    const std::string sp = r.str("splitting", "lie");
    if (sp == "lie")
      c.solver.splitting = Splitting::Lie;
    else if (sp == "strang")
      c.solver.splitting = Splitting::Strang;
    else
      throw ConfigError("solver.splitting must be lie or strang");
    c.solver.dealias = r.boolean("dealias", true);
    r.finish();
    validate(c.solver);
  }
  {
    Reader r(ini, "potential");
    const std::string kind = r.str("kind", "zero");
    const double a = r.num("a", 1.0);
    const double sigma = r.num("sigma_yield", 1.0);
    if (kind == "zero")
      c.potential = PotentialSpec::zero();
    else if (kind == "quadratic")
      c.potential = PotentialSpec::quadratic(a);
    else if (kind == "yield")
      c.potential = PotentialSpec::yield(a, sigma);
    else
      throw ConfigError("potential.kind must be zero, quadratic or yield");
    r.finish();
  }
  {
    Reader r(ini, "scenario");
    c.scenario.name = r.str("name", "scenario");
    const std::string vi = r.str("v_init", "taylor_green");
    if (vi == "taylor_green")
      c.scenario.v_init = ScenarioSpec::VInit::TaylorGreen;
    else if (vi == "random_divfree")
      c.scenario.v_init = ScenarioSpec::VInit::RandomDivFree;
    else
      throw ConfigError("scenario.v_init must be taylor_green or random_divfree");
    c.scenario.v_amplitude = r.num("v_amplitude", 1.0);
    c.scenario.seed = r.uinteger("seed", 0);
    c.scenario.spectral_decay = r.num("spectral_decay", 4.0);
    const std::string si = r.str("s_init", "zero");
    if (si == "zero")
      c.scenario.s_init = ScenarioSpec::SInit::Zero;
    else if (si == "constant")
      c.scenario.s_init = ScenarioSpec::SInit::ConstantDeviatoric;
    else if (si == "modulated")
      c.scenario.s_init = ScenarioSpec::SInit::Modulated;
    else
      throw ConfigError("scenario.s_init must be zero, constant or modulated");
    c.scenario.s_amplitude = r.num("s_amplitude", 0.0);
    c.scenario.s_mode = r.integer("s_mode", 1);
    const std::vector<double> tensor = r.num_list("s_tensor");
    if (!tensor.empty()) {
      const std::size_t want = static_cast<std::size_t>(c.scenario.grid.dim) * c.scenario.grid.dim;
      if (tensor.size() != want)
        throw ConfigError("scenario.s_tensor needs dim*dim entries");
      for (std::size_t i = 0; i < want; ++i) c.scenario.s_tensor[i] = tensor[i];
    }
    const std::string fo = r.str("forcing", "none");
    if (fo == "none")
      c.scenario.forcing.kind = ForcingSpec::Kind::None;
    else if (fo == "tg_manufactured")
      c.scenario.forcing.kind = ForcingSpec::Kind::TgManufactured;
    else
      throw ConfigError("scenario.forcing must be none or tg_manufactured");
    c.scenario.forcing.amplitude = r.num("f_amplitude", 0.0);
    c.scenario.forcing.rate = r.num("f_rate", 0.0);
    c.solver.forcing = c.scenario.forcing;
    r.finish();
  }
  {
    Reader r(ini, "output");
    c.output.directory = r.str("directory", "out");
    c.output.record_every = r.integer("record_every", 1);
    c.output.checkpoint_every = r.integer("checkpoint_every", 0);
    if (c.output.record_every < 1) throw ConfigError("output.record_every must be >= 1");
    if (c.output.checkpoint_every < 0) throw ConfigError("output.checkpoint_every must be >= 0");
    r.finish();
  }
  {
    Reader r(ini, "diagnostics");
    const std::string pairs = r.str("pairs", "");
    if (!pairs.empty())
      for (const std::string& spec : split(pairs, ','))
        if (!spec.empty()) c.diagnostics.pairs.push_back(parse_pair_spec(spec));
    const std::string w = r.str("weight", "zero");
    if (w == "zero")
      c.diagnostics.weight_kind = RegularityWeight::Kind::Zero;
    else if (w == "weakstrong")
      c.diagnostics.weight_kind = RegularityWeight::Kind::WeakStrong;
    else if (w == "tildes")
      c.diagnostics.weight_kind = RegularityWeight::Kind::TildeS;
    else if (w == "ks")
      c.diagnostics.weight_kind = RegularityWeight::Kind::Ks;
    else
      throw ConfigError("diagnostics.weight must be zero, weakstrong, tildes or ks");
    c.diagnostics.calibrate = r.boolean("calibrate", true);
    c.diagnostics.weight_C = r.num("weight_C", 0.0);
    c.diagnostics.weight_r = r.num("weight_r", 6.0);
    c.diagnostics.weight_p = r.num("weight_p", 6.0);
    c.diagnostics.calib_samples = r.integer("calib_samples", 48);
    c.diagnostics.calib_seed = r.uinteger("calib_seed", 2026);
    r.finish();
  }
  {
    Reader r(ini, "sweep");
    c.sweep.gammas = r.num_list("gammas");
    r.finish();
  }
  {
    Reader r(ini, "weakstrong");
    c.weak_strong.delta = r.num("delta", 1e-3);
    c.weak_strong.noise_seed = r.uinteger("noise_seed", 77);
    r.finish();
  }

  if (!ini.empty()) throw ConfigError("unknown section [" + ini.begin()->first + "]");
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "dim = " << c.scenario.grid.dim << "\n";
  out << "n = " << c.scenario.grid.n << "\n";
  out << "length = " << format_number(c.scenario.grid.length) << "\n\n";

  out << "[solver]\n";
  out << "mu = " << format_number(c.solver.mu) << "\n";
  out << "eta = " << format_number(c.solver.eta) << "\n";
  out << "gamma = " << format_number(c.solver.gamma) << "\n";
  out << "dt = " << format_number(c.solver.dt) << "\n";
  out << "t_end = " << format_number(c.solver.t_end) << "\n";
  out << "cfl_safety = " << format_number(c.solver.cfl_safety) << "\n";
  out << "splitting = " << (c.solver.splitting == Splitting::Lie ? "lie" : "strang") << "\n";
  out << "dealias = " << (c.solver.dealias ? "true" : "false") << "\n\n";

  out << "[potential]\n";
  switch (c.potential.kind) {
    case PotentialSpec::Kind::Zero: out << "kind = zero\n"; break;
    case PotentialSpec::Kind::Quadratic: out << "kind = quadratic\n"; break;
    case PotentialSpec::Kind::YieldConstrained: out << "kind = yield\n"; break;
  }
  out << "a = " << format_number(c.potential.a) << "\n";
  out << "sigma_yield = " << format_number(c.potential.sigma_yield) << "\n\n";

  out << "[scenario]\n";
  out << "name = " << c.scenario.name << "\n";
  out << "v_init = "
      << (c.scenario.v_init == ScenarioSpec::VInit::TaylorGreen ? "taylor_green" : "random_divfree")
      << "\n";
  out << "v_amplitude = " << format_number(c.scenario.v_amplitude) << "\n";
  out << "seed = " << c.scenario.seed << "\n";
  out << "spectral_decay = " << format_number(c.scenario.spectral_decay) << "\n";
  switch (c.scenario.s_init) {
    case ScenarioSpec::SInit::Zero: out << "s_init = zero\n"; break;
    case ScenarioSpec::SInit::ConstantDeviatoric: out << "s_init = constant\n"; break;
    case ScenarioSpec::SInit::Modulated: out << "s_init = modulated\n"; break;
  }
  out << "s_amplitude = " << format_number(c.scenario.s_amplitude) << "\n";
  out << "s_mode = " << c.scenario.s_mode << "\n";
  if (c.scenario.s_init == ScenarioSpec::SInit::ConstantDeviatoric) {
    out << "s_tensor = ";
    const std::size_t want = static_cast<std::size_t>(c.scenario.grid.dim) * c.scenario.grid.dim;
    for (std::size_t i = 0; i < want; ++i)
      out << (i ? "," : "") << format_number(c.scenario.s_tensor[i]);
    out << "\n";
  }
  out << "forcing = "
      << (c.scenario.forcing.kind == ForcingSpec::Kind::None ? "none" : "tg_manufactured") << "\n";
  out << "f_amplitude = " << format_number(c.scenario.forcing.amplitude) << "\n";
  out << "f_rate = " << format_number(c.scenario.forcing.rate) << "\n\n";

  out << "[output]\n";
  out << "directory = " << c.output.directory << "\n";
  out << "record_every = " << c.output.record_every << "\n";
  out << "checkpoint_every = " << c.output.checkpoint_every << "\n\n";

  out << "[diagnostics]\n";
  if (!c.diagnostics.pairs.empty()) {
    out << "pairs = ";
    for (std::size_t i = 0; i < c.diagnostics.pairs.size(); ++i)
      out << (i ? ", " : "") << pair_spec_string(c.diagnostics.pairs[i]);
    out << "\n";
  }
  out << "weight = " << weight_kind_string(c.diagnostics.weight_kind) << "\n";
  out << "calibrate = " << (c.diagnostics.calibrate ? "true" : "false") << "\n";
  out << "weight_C = " << format_number(c.diagnostics.weight_C) << "\n";
  out << "weight_r = " << format_number(c.diagnostics.weight_r) << "\n";
  out << "weight_p = " << format_number(c.diagnostics.weight_p) << "\n";
  out << "calib_samples = " << c.diagnostics.calib_samples << "\n";
  out << "calib_seed = " << c.diagnostics.calib_seed << "\n\n";

  if (!c.sweep.gammas.empty()) {
    out << "[sweep]\n";
    out << "gammas = ";
    for (std::size_t i = 0; i < c.sweep.gammas.size(); ++i)
      out << (i ? "," : "") << format_number(c.sweep.gammas[i]);
    out << "\n\n";
  }

  out << "[weakstrong]\n";
  out << "delta = " << format_number(c.weak_strong.delta) << "\n";
  out << "noise_seed = " << c.weak_strong.noise_seed << "\n";
  return out.str();
}

std::vector<RunConfig> gamma_sweep_specs(const RunConfig& base, const std::vector<double>& gammas) {
  if (gammas.empty()) throw InvalidArgumentError("gamma sweep needs at least one gamma");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw OrderingError("gamma sweep entries must be positive");
    if (i > 0 && !(gammas[i] < gammas[i - 1]))
      throw OrderingError("gamma sweep entries must be strictly decreasing");
  }
  std::vector<RunConfig> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    RunConfig c = base;
    c.solver.gamma = g;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace vep
