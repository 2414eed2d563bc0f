#include "vep/grid.hpp"

#include <cmath>
#include <string>

#include "vep/errors.hpp"

namespace vep {

std::size_t Grid::node_count() const {
  std::size_t c = 1;
  for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(n);
  return c;
}

double Grid::cell_volume() const { return std::pow(h(), dim); }

double Grid::volume() const { return std::pow(length, dim); }

Grid make_grid(int dim, int n, double length) {
  if (dim != 2 && dim != 3)
    throw InvalidArgumentError("grid dim must be 2 or 3, got " + std::to_string(dim));
  if (n < 8 || n % 2 != 0)
    throw InvalidArgumentError("grid n must be even and >= 8, got " + std::to_string(n));
  if (!(length > 0.0)) throw InvalidArgumentError("grid length must be positive");
  return Grid{dim, n, length};
}

}  // namespace vep
