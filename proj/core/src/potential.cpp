#include "vep/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vep/errors.hpp"
#include "vep/rng.hpp"

namespace vep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// |T| <= sigma*(1+slack) counts as feasible, absorbing roundoff.
constexpr double kFeasibilitySlack = 1e-12;

void require_deviatoric(const NodeTensor& t, const char* who) {
  const double mag = t.frobenius();
  const double tol = 1e-10 * (1.0 + mag);
  double defect = std::abs(t.trace());
  for (int i = 0; i < t.dim; ++i)
    for (int j = i + 1; j < t.dim; ++j) defect = std::max(defect, std::abs(t(i, j) - t(j, i)));
  if (defect > tol)
    throw ContractViolationError(std::string(who) + ": input tensor is not symmetric deviatoric");
}

/// Random deviatoric direction with unit Frobenius norm.
NodeTensor random_deviatoric_dir(int dim, std::uint64_t key, std::uint64_t ctr) {
  NodeTensor g{dim, {}};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = rng::normal(key, ctr + static_cast<std::uint64_t>(i * dim + j));
  NodeTensor d = deviatoric_part(g);
  const double m = d.frobenius();
  if (m == 0.0) {
    d = NodeTensor{dim, {}};
    d(0, 0) = 1.0 / std::sqrt(2.0);
    d(1, 1) = -1.0 / std::sqrt(2.0);
    return d;
  }
  return (1.0 / m) * d;
}

}  // namespace

PotentialSpec PotentialSpec::quadratic(double a) {
  if (a < 0.0) throw InvalidArgumentError("quadratic potential requires a >= 0");
  return {Kind::Quadratic, a, 1.0};
}

PotentialSpec PotentialSpec::yield(double a, double sigma_yield) {
  if (a < 0.0) throw InvalidArgumentError("yield potential requires a >= 0");
  if (!(sigma_yield > 0.0)) throw InvalidArgumentError("yield potential requires sigma_yield > 0");
  return {Kind::YieldConstrained, a, sigma_yield};
}

double pointwise_value(const PotentialSpec& spec, const NodeTensor& t) {
  require_deviatoric(t, "pointwise_value");
  switch (spec.kind) {
    case PotentialSpec::Kind::Zero:
      return 0.0;
    case PotentialSpec::Kind::Quadratic: {
      const double m = t.frobenius();
      return 0.5 * spec.a * m * m;
    }
    case PotentialSpec::Kind::YieldConstrained: {
      const double m = t.frobenius();
      if (m > spec.sigma_yield * (1.0 + kFeasibilitySlack)) return kInf;
      return 0.5 * spec.a * m * m;
    }
  }
  return 0.0;
}

double total_value(const PotentialSpec& spec, const DeviatoricField& s) {
  if (spec.kind == PotentialSpec::Kind::Zero) return 0.0;
  const int d = s.grid().dim;
  const std::size_t nn = s.nodes();
  detail::CompensatedSum acc;
  const double bound = spec.sigma_yield * (1.0 + kFeasibilitySlack);
  for (std::size_t k = 0; k < nn; ++k) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sq += s.at(i, j, k) * s.at(i, j, k);
    if (spec.kind == PotentialSpec::Kind::YieldConstrained && sq > bound * bound) return kInf;
    acc.add(0.5 * spec.a * sq);
  }
  return acc.value() * s.grid().cell_volume();
}

NodeTensor prox_pointwise(const PotentialSpec& spec, double tau, const NodeTensor& x) {
  if (!(tau > 0.0)) throw InvalidArgumentError("prox_pointwise requires tau > 0");
  switch (spec.kind) {
    case PotentialSpec::Kind::Zero:
      return x;
    case PotentialSpec::Kind::Quadratic:
      return (1.0 / (1.0 + spec.a * tau)) * x;
    case PotentialSpec::Kind::YieldConstrained: {
      const double shrunk = x.frobenius() / (1.0 + spec.a * tau);
      if (shrunk <= spec.sigma_yield) return (1.0 / (1.0 + spec.a * tau)) * x;
      return (spec.sigma_yield / x.frobenius()) * x;  // radial projection
    }
  }
  return x;
}

DeviatoricField prox_field(const PotentialSpec& spec, double tau, const DeviatoricField& s) {
  if (!(tau > 0.0)) throw InvalidArgumentError("prox_field requires tau > 0");
  TensorField out = s.tensor();
  if (spec.kind == PotentialSpec::Kind::Zero) return DeviatoricField::unchecked(std::move(out));

  const int d = out.dim();
  const std::size_t nn = out.nodes();
  const double shrink = 1.0 / (1.0 + spec.a * tau);
  for (std::size_t k = 0; k < nn; ++k) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sq += out.at(i, j, k) * out.at(i, j, k);
    double factor = shrink;
    if (spec.kind == PotentialSpec::Kind::YieldConstrained) {
      const double mag = std::sqrt(sq);
      if (mag * shrink > spec.sigma_yield) factor = spec.sigma_yield / mag;
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.at(i, j, k) *= factor;
  }
  // the closed forms are radial: symmetry and trace-freeness survive exactly
  return DeviatoricField::unchecked(std::move(out));
}

double moreau_value(const PotentialSpec& spec, double eps, const NodeTensor& t) {
  if (!(eps > 0.0)) throw InvalidArgumentError("moreau_value requires eps > 0");
  const NodeTensor p = prox_pointwise(spec, eps, t);
  const NodeTensor diff = t - p;
  const double d = diff.frobenius();
  return pointwise_value(spec, p) + 0.5 / eps * d * d;
}

NodeTensor moreau_grad(const PotentialSpec& spec, double eps, const NodeTensor& t) {
  if (!(eps > 0.0)) throw InvalidArgumentError("moreau_grad requires eps > 0");
  return (1.0 / eps) * (t - prox_pointwise(spec, eps, t));
}

double conjugate_pointwise(const PotentialSpec& spec, const NodeTensor& g) {
  const double m = g.frobenius();
  switch (spec.kind) {
    case PotentialSpec::Kind::Zero:
      return m == 0.0 ? 0.0 : kInf;
    case PotentialSpec::Kind::Quadratic:
      if (spec.a == 0.0) return m == 0.0 ? 0.0 : kInf;  // conjugate of the zero density
      return 0.5 * m * m / spec.a;
    case PotentialSpec::Kind::YieldConstrained:
      if (m <= spec.a * spec.sigma_yield) return 0.5 * m * m / spec.a;
      return spec.sigma_yield * m - 0.5 * spec.a * spec.sigma_yield * spec.sigma_yield;
  }
  return 0.0;
}

SubgradientCheck subgradient_check(const PotentialSpec& spec, const NodeTensor& t,
                                   const NodeTensor& g, int samples, std::uint64_t seed,
                                   double tol) {
  const double pt = pointwise_value(spec, t);
  if (!std::isfinite(pt))
    throw InvalidArgumentError("subgradient_check: base point is infeasible");

  const double radius =
      spec.kind == PotentialSpec::Kind::YieldConstrained ? spec.sigma_yield : 4.0 * (1.0 + t.frobenius());

  SubgradientCheck result;
  result.worst_defect = 0.0;
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t ctr = static_cast<std::uint64_t>(k) * 16;
    NodeTensor cand{t.dim, {}};
    if (k == 0) {
      cand = t;  // equality case
    } else {
      const NodeTensor dir = random_deviatoric_dir(t.dim, seed, ctr);
      const double rho = radius * rng::uniform01(seed, ctr + 9);
      cand = rho * dir;
    }
    const double pc = pointwise_value(spec, cand);
    if (!std::isfinite(pc)) continue;
    // violation of P(cand) >= P(t) + g:(cand - t)
    const double defect = pt + ddot(g, cand - t) - pc;
    result.worst_defect = std::max(result.worst_defect, defect);
  }
  result.ok = result.worst_defect <= tol;
  return result;
}

}  // namespace vep
