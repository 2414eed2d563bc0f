#include "vep/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include "vep/errors.hpp"

namespace vep {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuf {
  double* p;
  explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
  ~RealBuf() { fftw_free(p); }
  RealBuf(const RealBuf&) = delete;
  RealBuf& operator=(const RealBuf&) = delete;
};

struct CplxBuf {
  fftw_complex* p;
  explicit CplxBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~CplxBuf() { fftw_free(p); }
  CplxBuf(const CplxBuf&) = delete;
  CplxBuf& operator=(const CplxBuf&) = delete;
};

}  // namespace

SpectralWorkspace::SpectralWorkspace(const Grid& g) : grid_(g) {
  const int n = g.n;
  const int half = n / 2 + 1;
  spec_size_ = 1;
  for (int d = 0; d < g.dim - 1; ++d) spec_size_ *= static_cast<std::size_t>(n);
  spec_size_ *= static_cast<std::size_t>(half);

  // Strictly 3K < n so that triple products of dealiased fields are
  // quadrature-exact on the nodal grid.
  cutoff_ = (n - 1) / 3;

  for (int d = 0; d < 3; ++d) k_[d].assign(spec_size_, 0.0);
  k2_.assign(spec_size_, 0.0);
  mask_.assign(spec_size_, 1);

  const double k0 = kTwoPi / g.length;
  const std::size_t nn = g.node_count();
  std::size_t idx = 0;
  const int n0 = (g.dim == 3) ? n : 1;
  for (int i0 = 0; i0 < n0; ++i0) {
    const int m0 = (i0 <= n / 2) ? i0 : i0 - n;
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = (i1 <= n / 2) ? i1 : i1 - n;
      for (int i2 = 0; i2 < half; ++i2, ++idx) {
        const int m2 = i2;
        int m[3] = {0, 0, 0};
        if (g.dim == 3) {
          m[0] = m0;
          m[1] = m1;
          m[2] = m2;
        } else {
          m[0] = m1;
          m[1] = m2;
        }
        double ksq = 0.0;
        bool keep = true;
        for (int d = 0; d < g.dim; ++d) {
          // Nyquist derivative is ambiguous for real data; zero it.
          k_[d][idx] = (std::abs(m[d]) == n / 2) ? 0.0 : k0 * m[d];
          ksq += (k0 * m[d]) * (k0 * m[d]);
          if (std::abs(m[d]) > cutoff_) keep = false;
        }
        k2_[idx] = ksq;
        mask_[idx] = keep ? 1 : 0;
      }
    }
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  RealBuf in(nn);
  CplxBuf out(spec_size_);
  int dims[3] = {n, n, n};
  fwd_plan_ = fftw_plan_dft_r2c(g.dim, dims, in.p, out.p, FFTW_ESTIMATE);
  bwd_plan_ = fftw_plan_dft_c2r(g.dim, dims, out.p, in.p, FFTW_ESTIMATE);
  if (fwd_plan_ == nullptr || bwd_plan_ == nullptr)
    throw Error("FFTW plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_plan_));
}

void SpectralWorkspace::forward(const double* physical, std::complex<double>* spectral) const {
  const std::size_t nn = grid_.node_count();
  RealBuf in(nn);
  CplxBuf out(spec_size_);
  std::memcpy(in.p, physical, nn * sizeof(double));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_plan_), in.p, out.p);
  std::memcpy(spectral, out.p, spec_size_ * sizeof(fftw_complex));
}

void SpectralWorkspace::inverse(const std::complex<double>* spectral, double* physical) const {
  const std::size_t nn = grid_.node_count();
  CplxBuf in(spec_size_);
  RealBuf out(nn);
  std::memcpy(in.p, spectral, spec_size_ * sizeof(fftw_complex));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_plan_), in.p, out.p);
  const double scale = 1.0 / static_cast<double>(nn);
  for (std::size_t i = 0; i < nn; ++i) physical[i] = out.p[i] * scale;
}

// ---- helpers -------------------------------------------------------------------

namespace {

using Cvec = std::vector<std::complex<double>>;

Cvec fwd(const SpectralWorkspace& ws, const double* x) {
  Cvec s(ws.spec_size());
  ws.forward(x, s.data());
  return s;
}

void derivative_into(const SpectralWorkspace& ws, const Cvec& spec, int axis, double* out) {
  Cvec tmp(ws.spec_size());
  const auto& k = ws.wavenumber(axis);
  for (std::size_t i = 0; i < tmp.size(); ++i)
    tmp[i] = std::complex<double>(0.0, k[i]) * spec[i];
  ws.inverse(tmp.data(), out);
}

void mask_spectrum(const SpectralWorkspace& ws, Cvec& spec) {
  const auto& m = ws.dealias_mask();
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (!m[i]) spec[i] = 0.0;
}

void dealias_component(const SpectralWorkspace& ws, double* x) {
  Cvec s = fwd(ws, x);
  mask_spectrum(ws, s);
  ws.inverse(s.data(), x);
}

}  // namespace

// ---- differential operators ------------------------------------------------------

VectorField gradient(const SpectralWorkspace& ws, const ScalarField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  VectorField g(f.grid());
  const Cvec s = fwd(ws, f.data());
  for (int d = 0; d < f.grid().dim; ++d) derivative_into(ws, s, d, g.comp(d));
  return g;
}

TensorField gradient(const SpectralWorkspace& ws, const VectorField& v) {
  detail::require_same_grid(ws.grid(), v.grid());
  TensorField g(v.grid());
  for (int j = 0; j < v.comps(); ++j) {
    const Cvec s = fwd(ws, v.comp(j));
    for (int k = 0; k < v.comps(); ++k) derivative_into(ws, s, k, g.comp(j, k));
  }
  return g;
}

std::vector<TensorField> gradient(const SpectralWorkspace& ws, const TensorField& t) {
  detail::require_same_grid(ws.grid(), t.grid());
  const int d = t.dim();
  std::vector<TensorField> g;
  g.reserve(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) g.emplace_back(t.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Cvec s = fwd(ws, t.comp(i, j));
      for (int l = 0; l < d; ++l) derivative_into(ws, s, l, g[static_cast<std::size_t>(l)].comp(i, j));
    }
  return g;
}

ScalarField divergence(const SpectralWorkspace& ws, const VectorField& v) {
  detail::require_same_grid(ws.grid(), v.grid());
  Cvec acc(ws.spec_size(), {0.0, 0.0});
  for (int d = 0; d < v.comps(); ++d) {
    const Cvec s = fwd(ws, v.comp(d));
    const auto& k = ws.wavenumber(d);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::complex<double>(0.0, k[i]) * s[i];
  }
  ScalarField out(v.grid());
  ws.inverse(acc.data(), out.data());
  return out;
}

VectorField divergence_tensor(const SpectralWorkspace& ws, const TensorField& t) {
  detail::require_same_grid(ws.grid(), t.grid());
  VectorField out(t.grid());
  for (int j = 0; j < t.dim(); ++j) {
    Cvec acc(ws.spec_size(), {0.0, 0.0});
    for (int k = 0; k < t.dim(); ++k) {
      const Cvec s = fwd(ws, t.comp(j, k));
      const auto& kk = ws.wavenumber(k);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::complex<double>(0.0, kk[i]) * s[i];
    }
    ws.inverse(acc.data(), out.comp(j));
  }
  return out;
}

namespace {
void laplacian_component(const SpectralWorkspace& ws, const double* in, double* out) {
  Cvec s(ws.spec_size());
  ws.forward(in, s.data());
  const auto& k2 = ws.k_squared();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -k2[i];
  ws.inverse(s.data(), out);
}
}  // namespace

ScalarField laplacian(const SpectralWorkspace& ws, const ScalarField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  ScalarField out(f.grid());
  laplacian_component(ws, f.data(), out.data());
  return out;
}

VectorField laplacian(const SpectralWorkspace& ws, const VectorField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  VectorField out(f.grid());
  for (int c = 0; c < f.comps(); ++c) laplacian_component(ws, f.comp(c), out.comp(c));
  return out;
}

TensorField laplacian(const SpectralWorkspace& ws, const TensorField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  TensorField out(f.grid());
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) laplacian_component(ws, f.comp(i, j), out.comp(i, j));
  return out;
}

double h1_seminorm(const SpectralWorkspace& ws, const ScalarField& f) {
  return lp_norm(gradient(ws, f), 2.0);
}

double h1_seminorm(const SpectralWorkspace& ws, const VectorField& f) {
  return lp_norm(gradient(ws, f), 2.0);
}

double h1_seminorm(const SpectralWorkspace& ws, const TensorField& f) {
  const std::vector<TensorField> g = gradient(ws, f);
  detail::CompensatedSum acc;
  for (const TensorField& gl : g) acc.add(inner_product_l2(gl, gl));
  return std::sqrt(acc.value());
}

double h1_seminorm(const SpectralWorkspace& ws, const DeviatoricField& f) {
  return h1_seminorm(ws, f.tensor());
}

// ---- pointwise tensor algebra ------------------------------------------------------

TensorField sym_part(const TensorField& g) {
  TensorField r(g.grid());
  const int d = g.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double* a = g.comp(i, j);
      const double* b = g.comp(j, i);
      double* out = r.comp(i, j);
      for (std::size_t k = 0; k < g.nodes(); ++k) out[k] = 0.5 * (a[k] + b[k]);
    }
  return r;
}

TensorField skew_part(const TensorField& g) {
  TensorField r(g.grid());
  const int d = g.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double* a = g.comp(i, j);
      const double* b = g.comp(j, i);
      double* out = r.comp(i, j);
      for (std::size_t k = 0; k < g.nodes(); ++k) out[k] = 0.5 * (a[k] - b[k]);
    }
  return r;
}

DeviatoricField jaumann_rotation(const DeviatoricField& s, const TensorField& w) {
  detail::require_same_grid(s.grid(), w.grid());
  const int d = w.dim();
  const std::size_t nn = w.nodes();

  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < nn; ++k) {
    const NodeTensor wk = w.node(k);
    scale = std::max(scale, wk.frobenius());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) worst = std::max(worst, std::abs(wk(i, j) + wk(j, i)));
  }
  if (worst > 1e-10 * std::max(1.0, scale))
    throw ContractViolationError("jaumann_rotation: W is not skew-symmetric");

  TensorField r(w.grid());
  for (std::size_t k = 0; k < nn; ++k) {
    const NodeTensor sk = s.node(k);
    const NodeTensor wk = w.node(k);
    r.set_node(k, matmul(sk, wk) - matmul(wk, sk));
  }
  // S W - W S of symmetric S and skew W is symmetric and trace-free by algebra.
  return DeviatoricField::unchecked(std::move(r));
}

// ---- transport, projection, filtering ------------------------------------------------

namespace {

template <class FieldT>
FieldT advect_impl(const SpectralWorkspace& ws, const VectorField& v, const FieldT& x,
                   int comps, bool dealias_product) {
  detail::require_same_grid(v.grid(), x.grid());
  detail::require_same_grid(ws.grid(), x.grid());
  const std::size_t nn = v.nodes();
  const int dim = v.comps();
  FieldT out(x.grid());
  std::vector<double> deriv(nn);
  for (int c = 0; c < comps; ++c) {
    const double* xc = x.data() + static_cast<std::size_t>(c) * nn;
    double* oc = out.data() + static_cast<std::size_t>(c) * nn;
    const Cvec s = fwd(ws, xc);
    for (int l = 0; l < dim; ++l) {
      derivative_into(ws, s, l, deriv.data());
      const double* vl = v.comp(l);
      for (std::size_t k = 0; k < nn; ++k) oc[k] += vl[k] * deriv[k];
    }
    if (dealias_product) dealias_component(ws, oc);
  }
  return out;
}

}  // namespace

VectorField advect(const SpectralWorkspace& ws, const VectorField& v, const VectorField& x,
                   bool dealias_product) {
  return advect_impl(ws, v, x, x.comps(), dealias_product);
}

TensorField advect(const SpectralWorkspace& ws, const VectorField& v, const TensorField& x,
                   bool dealias_product) {
  return advect_impl(ws, v, x, x.comps(), dealias_product);
}

VectorField leray_project(const SpectralWorkspace& ws, const VectorField& u) {
  detail::require_same_grid(ws.grid(), u.grid());
  const int dim = u.comps();
  std::vector<Cvec> s;
  s.reserve(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) s.push_back(fwd(ws, u.comp(c)));

  const auto& k2 = ws.k_squared();
  for (std::size_t i = 0; i < ws.spec_size(); ++i) {
    if (k2[i] == 0.0) continue;  // mean momentum passes through
    std::complex<double> kdotu(0.0, 0.0);
    for (int c = 0; c < dim; ++c) kdotu += ws.wavenumber(c)[i] * s[static_cast<std::size_t>(c)][i];
    const std::complex<double> factor = kdotu / k2[i];
    for (int c = 0; c < dim; ++c) s[static_cast<std::size_t>(c)][i] -= ws.wavenumber(c)[i] * factor;
  }

  VectorField out(u.grid());
  for (int c = 0; c < dim; ++c) ws.inverse(s[static_cast<std::size_t>(c)].data(), out.comp(c));
  return out;
}

ScalarField dealias(const SpectralWorkspace& ws, const ScalarField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  ScalarField out = f;
  dealias_component(ws, out.data());
  return out;
}

VectorField dealias(const SpectralWorkspace& ws, const VectorField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  VectorField out = f;
  for (int c = 0; c < f.comps(); ++c) dealias_component(ws, out.comp(c));
  return out;
}

TensorField dealias(const SpectralWorkspace& ws, const TensorField& f) {
  detail::require_same_grid(ws.grid(), f.grid());
  TensorField out = f;
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) dealias_component(ws, out.comp(i, j));
  return out;
}

namespace {
void heat_component(const SpectralWorkspace& ws, double* x, double coef, double dt) {
  Cvec s = fwd(ws, x);
  const auto& k2 = ws.k_squared();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::exp(-coef * k2[i] * dt);
  ws.inverse(s.data(), x);
}
}  // namespace

void heat_decay(const SpectralWorkspace& ws, VectorField& f, double coef, double dt) {
  if (coef == 0.0 || dt == 0.0) return;
  detail::require_same_grid(ws.grid(), f.grid());
  for (int c = 0; c < f.comps(); ++c) heat_component(ws, f.comp(c), coef, dt);
}

void heat_decay(const SpectralWorkspace& ws, TensorField& f, double coef, double dt) {
  if (coef == 0.0 || dt == 0.0) return;
  detail::require_same_grid(ws.grid(), f.grid());
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) heat_component(ws, f.comp(i, j), coef, dt);
}

}  // namespace vep
