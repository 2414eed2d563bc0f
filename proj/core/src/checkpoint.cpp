#include "vep/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vep/errors.hpp"

namespace vep {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts are unsupported");

namespace {

std::vector<std::string> component_names(int dim) {
  std::vector<std::string> names;
  for (int c = 0; c < dim; ++c) names.push_back("v" + std::to_string(c));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      names.push_back("S" + std::to_string(i) + std::to_string(j));
  return names;
}

}  // namespace

void write_state(const std::string& path, const State& state) {
  const Grid& g = state.v.grid();
  nlohmann::json header;
  header["dim"] = g.dim;
  header["n"] = g.n;
  header["length"] = g.length;
  header["t"] = state.t;
  header["components"] = component_names(g.dim);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out << header.dump() << '\n';

  const std::size_t nn = g.node_count();
  for (int c = 0; c < g.dim; ++c)
    out.write(reinterpret_cast<const char*>(state.v.comp(c)),
              static_cast<std::streamsize>(nn * sizeof(double)));
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      out.write(reinterpret_cast<const char*>(state.S.tensor().comp(i, j)),
                static_cast<std::streamsize>(nn * sizeof(double)));
  if (!out) throw IoError("short write on checkpoint: " + path);
}

State read_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("missing checkpoint header: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw IoError("bad checkpoint header in " + path + ": " + e.what());
  }

  const Grid g = make_grid(header.at("dim").get<int>(), header.at("n").get<int>(),
                           header.at("length").get<double>());
  const auto names = header.at("components").get<std::vector<std::string>>();
  if (names != component_names(g.dim))
    throw IoError("unexpected component list in checkpoint: " + path);

  State state;
  state.t = header.at("t").get<double>();
  state.v = VectorField(g);
  TensorField s(g);

  const std::size_t nn = g.node_count();
  for (int c = 0; c < g.dim; ++c)
    in.read(reinterpret_cast<char*>(state.v.comp(c)),
            static_cast<std::streamsize>(nn * sizeof(double)));
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      in.read(reinterpret_cast<char*>(s.comp(i, j)),
              static_cast<std::streamsize>(nn * sizeof(double)));
  if (!in) throw IoError("short read on checkpoint: " + path);
  state.S = DeviatoricField::unchecked(std::move(s));
  return state;
}

}  // namespace vep
