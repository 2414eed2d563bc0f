#include "vep/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vep {

namespace detail {

void CompensatedSum::add(double x) {
  const double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ShapeError("fields live on different grids");
}

}  // namespace detail

// ---- NodeTensor --------------------------------------------------------------

double NodeTensor::frobenius() const {
  double s = 0.0;
  for (int i = 0; i < dim * dim; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

double NodeTensor::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (*this)(i, i);
  return s;
}

NodeTensor NodeTensor::transpose() const {
  NodeTensor r{dim, {}};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = (*this)(j, i);
  return r;
}

NodeTensor operator+(const NodeTensor& x, const NodeTensor& y) {
  NodeTensor r{x.dim, {}};
  for (int i = 0; i < x.dim * x.dim; ++i)
    r.a[static_cast<std::size_t>(i)] = x.a[static_cast<std::size_t>(i)] + y.a[static_cast<std::size_t>(i)];
  return r;
}

NodeTensor operator-(const NodeTensor& x, const NodeTensor& y) {
  NodeTensor r{x.dim, {}};
  for (int i = 0; i < x.dim * x.dim; ++i)
    r.a[static_cast<std::size_t>(i)] = x.a[static_cast<std::size_t>(i)] - y.a[static_cast<std::size_t>(i)];
  return r;
}

NodeTensor operator*(double c, const NodeTensor& x) {
  NodeTensor r{x.dim, {}};
  for (int i = 0; i < x.dim * x.dim; ++i) r.a[static_cast<std::size_t>(i)] = c * x.a[static_cast<std::size_t>(i)];
  return r;
}

NodeTensor matmul(const NodeTensor& x, const NodeTensor& y) {
  NodeTensor r{x.dim, {}};
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < x.dim; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

double ddot(const NodeTensor& x, const NodeTensor& y) {
  double s = 0.0;
  for (int i = 0; i < x.dim * x.dim; ++i)
    s += x.a[static_cast<std::size_t>(i)] * y.a[static_cast<std::size_t>(i)];
  return s;
}

NodeTensor deviatoric_part(const NodeTensor& t) {
  NodeTensor r{t.dim, {}};
  for (int i = 0; i < t.dim; ++i)
    for (int j = 0; j < t.dim; ++j) r(i, j) = 0.5 * (t(i, j) + t(j, i));
  const double m = r.trace() / t.dim;
  for (int i = 0; i < t.dim; ++i) r(i, i) -= m;
  return r;
}

// ---- TensorField helpers ------------------------------------------------------

NodeTensor TensorField::node(std::size_t k) const {
  NodeTensor t{dim(), {}};
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) t(i, j) = at(i, j, k);
  return t;
}

void TensorField::set_node(std::size_t k, const NodeTensor& t) {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) at(i, j, k) = t(i, j);
}

DeviatoricField deviatoric_part(const TensorField& t) {
  TensorField r(t.grid());
  const int d = t.dim();
  const std::size_t nn = t.nodes();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double* tij = t.comp(i, j);
      const double* tji = t.comp(j, i);
      double* out = r.comp(i, j);
      for (std::size_t k = 0; k < nn; ++k) out[k] = 0.5 * (tij[k] + tji[k]);
    }
  // remove the spherical part
  for (std::size_t k = 0; k < nn; ++k) {
    double tr = 0.0;
    for (int i = 0; i < d; ++i) tr += r.at(i, i, k);
    const double m = tr / d;
    for (int i = 0; i < d; ++i) r.at(i, i, k) -= m;
  }
  return DeviatoricField::unchecked(std::move(r));
}

double deviatoric_defect(const TensorField& t) {
  const int d = t.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < t.nodes(); ++k) {
    const NodeTensor x = t.node(k);
    const double mag = x.frobenius();
    double defect = std::abs(x.trace());
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) defect = std::max(defect, std::abs(x(i, j) - x(j, i)));
    if (mag > 0.0) defect /= mag;
    worst = std::max(worst, defect);
  }
  return worst;
}

// ---- norms ---------------------------------------------------------------------

namespace {

// One contiguous block per component; fixed component-then-node visit order.
struct View {
  const Grid* grid;
  const double* data;
  int comps;
  std::size_t nodes;
};

View view(const ScalarField& f) { return {&f.grid(), f.data(), 1, f.size()}; }
View view(const VectorField& f) { return {&f.grid(), f.data(), f.comps(), f.nodes()}; }
View view(const TensorField& f) { return {&f.grid(), f.data(), f.comps(), f.nodes()}; }
View view(const DeviatoricField& f) { return view(f.tensor()); }

double node_sq(const View& v, std::size_t k) {
  double s = 0.0;
  for (int c = 0; c < v.comps; ++c) s += v.data[static_cast<std::size_t>(c) * v.nodes + k] * v.data[static_cast<std::size_t>(c) * v.nodes + k];
  return s;
}

double lp_norm_view(const View& v, double p) {
  if (!(p >= 1.0)) throw InvalidArgumentError("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < v.nodes; ++k) m = std::max(m, node_sq(v, k));
    return std::sqrt(m);
  }
  detail::CompensatedSum acc;
  if (p == 2.0) {
    for (std::size_t k = 0; k < v.nodes; ++k) acc.add(node_sq(v, k));
  } else {
    const double half_p = 0.5 * p;
    for (std::size_t k = 0; k < v.nodes; ++k) acc.add(std::pow(node_sq(v, k), half_p));
  }
  const double sum = acc.value() * v.grid->cell_volume();
  return p == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / p);
}

double inner_view(const View& a, const View& b) {
  detail::require_same_grid(*a.grid, *b.grid);
  if (a.comps != b.comps) throw ShapeError("inner_product_l2 rank mismatch");
  detail::CompensatedSum acc;
  for (std::size_t k = 0; k < a.nodes; ++k) {
    double s = 0.0;
    for (int c = 0; c < a.comps; ++c)
      s += a.data[static_cast<std::size_t>(c) * a.nodes + k] * b.data[static_cast<std::size_t>(c) * b.nodes + k];
    acc.add(s);
  }
  return acc.value() * a.grid->cell_volume();
}

}  // namespace

double lp_norm(const ScalarField& f, double p) { return lp_norm_view(view(f), p); }
double lp_norm(const VectorField& f, double p) { return lp_norm_view(view(f), p); }
double lp_norm(const TensorField& f, double p) { return lp_norm_view(view(f), p); }
double lp_norm(const DeviatoricField& f, double p) { return lp_norm_view(view(f), p); }

double inner_product_l2(const ScalarField& a, const ScalarField& b) { return inner_view(view(a), view(b)); }
double inner_product_l2(const VectorField& a, const VectorField& b) { return inner_view(view(a), view(b)); }
double inner_product_l2(const TensorField& a, const TensorField& b) { return inner_view(view(a), view(b)); }
double inner_product_l2(const DeviatoricField& a, const DeviatoricField& b) {
  return inner_view(view(a), view(b));
}

// ---- arithmetic ------------------------------------------------------------------

namespace {
template <class F>
F subtract_impl(const F& a, const F& b) {
  detail::require_same_grid(a.grid(), b.grid());
  F r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
  return r;
}
}  // namespace

ScalarField subtract(const ScalarField& a, const ScalarField& b) { return subtract_impl(a, b); }
VectorField subtract(const VectorField& a, const VectorField& b) { return subtract_impl(a, b); }
TensorField subtract(const TensorField& a, const TensorField& b) { return subtract_impl(a, b); }
TensorField subtract(const DeviatoricField& a, const DeviatoricField& b) {
  return subtract_impl(a.tensor(), b.tensor());
}

void scale_in_place(VectorField& f, double c) {
  for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] *= c;
}
void scale_in_place(TensorField& f, double c) {
  for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] *= c;
}

void axpy_in_place(VectorField& y, double c, const VectorField& x) {
  detail::require_same_grid(y.grid(), x.grid());
  for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += c * x.data()[i];
}
void axpy_in_place(TensorField& y, double c, const TensorField& x) {
  detail::require_same_grid(y.grid(), x.grid());
  for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += c * x.data()[i];
}

bool all_finite(const VectorField& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f.data()[i])) return false;
  return true;
}
bool all_finite(const TensorField& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f.data()[i])) return false;
  return true;
}

}  // namespace vep
