#pragma once

#include <cstddef>
#include <numbers>

namespace vep {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform periodic box [0,length)^dim with n nodes per axis.
/// Nodes are x_i = i*h, h = length/n; flat node index is C-ordered over axes.
struct Grid {
  int dim = 3;
  int n = 0;
  double length = kTwoPi;

  double h() const { return length / n; }
  std::size_t node_count() const;
  /// Quadrature weight of one node, h^dim. Exact for band-limited periodic data.
  double cell_volume() const;
  double volume() const;

  bool operator==(const Grid&) const = default;
};

/// Validates dim in {2,3}, n even with n >= 8, length > 0.
Grid make_grid(int dim, int n, double length = kTwoPi);

/// Visit nodes in C order with their coordinates: f(flat_index, x, y, z).
/// z is 0 on 2D grids.
template <class F>
void for_each_node(const Grid& g, F&& f) {
  const double h = g.h();
  std::size_t idx = 0;
  if (g.dim == 2) {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j, ++idx) f(idx, i * h, j * h, 0.0);
  } else {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k, ++idx) f(idx, i * h, j * h, k * h);
  }
}

}  // namespace vep
