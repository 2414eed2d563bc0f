#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vep/errors.hpp"
#include "vep/grid.hpp"

namespace vep {

/// Dense dim x dim matrix value at a single node (row-major; dim in {2,3}).
struct NodeTensor {
  int dim = 3;
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * dim + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * dim + j)]; }

  double frobenius() const;
  double trace() const;
  NodeTensor transpose() const;
};

NodeTensor operator+(const NodeTensor& x, const NodeTensor& y);
NodeTensor operator-(const NodeTensor& x, const NodeTensor& y);
NodeTensor operator*(double c, const NodeTensor& x);
/// Matrix product x*y.
NodeTensor matmul(const NodeTensor& x, const NodeTensor& y);
/// Frobenius pairing x : y.
double ddot(const NodeTensor& x, const NodeTensor& y);
/// sym(T) - (trace(sym T)/dim) * I; a linear, idempotent projection.
NodeTensor deviatoric_part(const NodeTensor& t);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid_(g), data_(g.node_count(), 0.0) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// dim velocity components, stored component-major (component c is contiguous).
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& g)
      : grid_(g), data_(static_cast<std::size_t>(g.dim) * g.node_count(), 0.0) {}

  const Grid& grid() const { return grid_; }
  int comps() const { return grid_.dim; }
  std::size_t nodes() const { return grid_.node_count(); }
  double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * nodes(); }
  const double* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * nodes(); }
  double& at(int c, std::size_t node) { return comp(c)[node]; }
  double at(int c, std::size_t node) const { return comp(c)[node]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// dim x dim tensor components, component (i,j) stored contiguously at slot i*dim+j.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& g)
      : grid_(g), data_(static_cast<std::size_t>(g.dim) * g.dim * g.node_count(), 0.0) {}

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  int comps() const { return grid_.dim * grid_.dim; }
  std::size_t nodes() const { return grid_.node_count(); }
  double* comp(int i, int j) {
    return data_.data() + static_cast<std::size_t>(i * dim() + j) * nodes();
  }
  const double* comp(int i, int j) const {
    return data_.data() + static_cast<std::size_t>(i * dim() + j) * nodes();
  }
  double& at(int i, int j, std::size_t node) { return comp(i, j)[node]; }
  double at(int i, int j, std::size_t node) const { return comp(i, j)[node]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  NodeTensor node(std::size_t k) const;
  void set_node(std::size_t k, const NodeTensor& t);

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// A TensorField that is symmetric and trace-free at every node.
/// Constructed through deviatoric_part() or unchecked() when the producer
/// guarantees the invariant algebraically (prox, Jaumann rotation, linear
/// spectral maps of deviatoric inputs).
class DeviatoricField {
 public:
  DeviatoricField() = default;
  static DeviatoricField zero(const Grid& g) { return DeviatoricField(TensorField(g)); }
  static DeviatoricField unchecked(TensorField t) { return DeviatoricField(std::move(t)); }

  const Grid& grid() const { return t_.grid(); }
  const TensorField& tensor() const { return t_; }
  TensorField& tensor() { return t_; }
  std::size_t nodes() const { return t_.nodes(); }
  double at(int i, int j, std::size_t node) const { return t_.at(i, j, node); }
  NodeTensor node(std::size_t k) const { return t_.node(k); }

 private:
  explicit DeviatoricField(TensorField t) : t_(std::move(t)) {}
  TensorField t_;
};

/// Nodewise sym(T) - (trace/dim) I. Idempotent linear projection.
DeviatoricField deviatoric_part(const TensorField& t);

/// Largest nodewise violation of symmetry/trace-freeness, relative to |T|.
double deviatoric_defect(const TensorField& t);

/// Solution snapshot (t, v, S); v divergence-free within the solver tolerance.
struct State {
  double t = 0.0;
  VectorField v;
  DeviatoricField S;
};

// ---- discrete norms -------------------------------------------------------
//
// All reductions run in a fixed deterministic order with Neumaier-compensated
// summation: two evaluations on identical data are bit-identical.

/// (h^d sum |.|^p)^(1/p) for p < inf; nodewise max for p = inf.
/// Pointwise magnitude: |value| / Euclidean / Frobenius by rank.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);
double lp_norm(const TensorField& f, double p);
double lp_norm(const DeviatoricField& f, double p);

/// h^d sum a:b (Frobenius pairing across ranks). Symmetric and bilinear.
double inner_product_l2(const ScalarField& a, const ScalarField& b);
double inner_product_l2(const VectorField& a, const VectorField& b);
double inner_product_l2(const TensorField& a, const TensorField& b);
double inner_product_l2(const DeviatoricField& a, const DeviatoricField& b);

// ---- field arithmetic ------------------------------------------------------

ScalarField subtract(const ScalarField& a, const ScalarField& b);
VectorField subtract(const VectorField& a, const VectorField& b);
TensorField subtract(const TensorField& a, const TensorField& b);
TensorField subtract(const DeviatoricField& a, const DeviatoricField& b);

void scale_in_place(VectorField& f, double c);
void scale_in_place(TensorField& f, double c);
/// y += c * x
void axpy_in_place(VectorField& y, double c, const VectorField& x);
void axpy_in_place(TensorField& y, double c, const TensorField& x);

bool all_finite(const VectorField& f);
bool all_finite(const TensorField& f);

namespace detail {

/// Neumaier-compensated accumulator; deterministic for a fixed visit order.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x);
  double value() const { return s + c; }
};

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace detail
}  // namespace vep
