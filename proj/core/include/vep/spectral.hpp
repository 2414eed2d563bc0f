#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "vep/field.hpp"
#include "vep/grid.hpp"

namespace vep {

/// Fourier-side workspace for one grid: cached wavenumbers, the 2/3-rule
/// dealias mask, and real<->complex transform plans.
///
/// Immutable after construction. Transforms execute on per-call scratch
/// buffers, so a workspace may be shared across threads.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const Grid& g);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const Grid& grid() const { return grid_; }
  /// Number of retained complex modes (last axis halved by Hermitian symmetry).
  std::size_t spec_size() const { return spec_size_; }
  /// Largest retained mode index K; modes with any |m_i| > K are masked.
  /// K = floor((n-1)/3): keeps 3K < n so cubic nodal sums are alias-free.
  int dealias_cutoff() const { return cutoff_; }

  /// physical -> spectral (unnormalized, FFTW forward convention).
  void forward(const double* physical, std::complex<double>* spectral) const;
  /// spectral -> physical, normalized by 1/n^dim.
  void inverse(const std::complex<double>* spectral, double* physical) const;

  /// Wavenumber component 2*pi*m_axis/length per retained mode.
  const std::vector<double>& wavenumber(int axis) const { return k_[axis]; }
  const std::vector<double>& k_squared() const { return k2_; }
  /// 1 where the mode survives the 2/3 rule, 0 otherwise.
  const std::vector<unsigned char>& dealias_mask() const { return mask_; }

 private:
  Grid grid_;
  int cutoff_ = 0;
  std::size_t spec_size_ = 0;
  std::vector<double> k_[3];
  std::vector<double> k2_;
  std::vector<unsigned char> mask_;
  void* fwd_plan_ = nullptr;  // fftw_plan, kept opaque here
  void* bwd_plan_ = nullptr;
};

// ---- differential operators (exact on the band-limited interpolant) --------

VectorField gradient(const SpectralWorkspace& ws, const ScalarField& f);
/// (grad v)_{jk} = d_k v_j.
TensorField gradient(const SpectralWorkspace& ws, const VectorField& v);
/// One TensorField per derivative axis: result[l] = d_l S.
std::vector<TensorField> gradient(const SpectralWorkspace& ws, const TensorField& s);

ScalarField divergence(const SpectralWorkspace& ws, const VectorField& v);
/// (Div S)_j = d_k S_jk (row divergence).
VectorField divergence_tensor(const SpectralWorkspace& ws, const TensorField& s);

ScalarField laplacian(const SpectralWorkspace& ws, const ScalarField& f);
VectorField laplacian(const SpectralWorkspace& ws, const VectorField& f);
TensorField laplacian(const SpectralWorkspace& ws, const TensorField& f);

/// lp_norm(gradient(f), 2), the H1 seminorm of the spectral interpolant.
double h1_seminorm(const SpectralWorkspace& ws, const ScalarField& f);
double h1_seminorm(const SpectralWorkspace& ws, const VectorField& f);
double h1_seminorm(const SpectralWorkspace& ws, const TensorField& f);
double h1_seminorm(const SpectralWorkspace& ws, const DeviatoricField& f);

// ---- pointwise tensor algebra ----------------------------------------------

/// 1/2 (G + G^T) nodewise.
TensorField sym_part(const TensorField& g);
/// 1/2 (G - G^T) nodewise.
TensorField skew_part(const TensorField& g);

/// Nodewise S W - W S. Output stays symmetric trace-free up to roundoff.
/// W must be skew nodewise: defect beyond 1e-10 relative raises
/// ContractViolationError.
DeviatoricField jaumann_rotation(const DeviatoricField& s, const TensorField& w);

// ---- transport, projection, filtering ---------------------------------------

/// sum_j v_j d_j X with the product dealiased (2/3 rule) when requested.
VectorField advect(const SpectralWorkspace& ws, const VectorField& v, const VectorField& x,
                   bool dealias_product = true);
TensorField advect(const SpectralWorkspace& ws, const VectorField& v, const TensorField& x,
                   bool dealias_product = true);

/// Fourier multiplier u_hat -> (I - k k^T/|k|^2) u_hat; mean mode passes through.
VectorField leray_project(const SpectralWorkspace& ws, const VectorField& u);

ScalarField dealias(const SpectralWorkspace& ws, const ScalarField& f);
VectorField dealias(const SpectralWorkspace& ws, const VectorField& f);
TensorField dealias(const SpectralWorkspace& ws, const TensorField& f);

/// In-place multiplication of the spectrum by exp(-coef |k|^2 dt).
/// Exact heat flow for the band-limited interpolant; no-op when coef == 0.
void heat_decay(const SpectralWorkspace& ws, VectorField& f, double coef, double dt);
void heat_decay(const SpectralWorkspace& ws, TensorField& f, double coef, double dt);

}  // namespace vep
