#pragma once

#include <cstdint>

#include "vep/field.hpp"

namespace vep {

/// Dissipation potential in integral form: a convex, lower-semicontinuous
/// density P on deviatoric matrices with P(O) = 0.
///
///   Zero:             P(T) = 0
///   Quadratic(a):     P(T) = (a/2)|T|^2
///   YieldConstrained: P(T) = (a/2)|T|^2 if |T| <= sigma_yield, +inf beyond
struct PotentialSpec {
  enum class Kind { Zero, Quadratic, YieldConstrained };

  Kind kind = Kind::Zero;
  double a = 1.0;
  double sigma_yield = 1.0;

  static PotentialSpec zero() { return {Kind::Zero, 0.0, 1.0}; }
  static PotentialSpec quadratic(double a);
  static PotentialSpec yield(double a, double sigma_yield);
};

/// Density value; +inf outside the yield ball. |T| <= sigma*(1+1e-12) counts
/// as feasible to absorb roundoff. Non-deviatoric T beyond tolerance raises
/// ContractViolationError.
double pointwise_value(const PotentialSpec& spec, const NodeTensor& t);

/// h^d sum of pointwise values; +inf as soon as one node is infeasible.
double total_value(const PotentialSpec& spec, const DeviatoricField& s);

/// prox_{tau P}(X): unique minimizer of (1/2 tau)|X - S|^2 + P(S).
/// Closed forms: Zero -> X; Quadratic -> X/(1+a tau); YieldConstrained ->
/// X/(1+a tau) if inside the ball, else the radial projection sigma X/|X|.
NodeTensor prox_pointwise(const PotentialSpec& spec, double tau, const NodeTensor& x);

/// Nodewise prox; output feasible everywhere, node order preserved.
DeviatoricField prox_field(const PotentialSpec& spec, double tau, const DeviatoricField& s);

/// Moreau envelope P_eps(T) = inf_T' ( P(T') + (1/2 eps)|T - T'|^2 ),
/// evaluated through the prox. Satisfies 0 <= P_eps <= min(P(T), |T|^2/(2 eps)).
double moreau_value(const PotentialSpec& spec, double eps, const NodeTensor& t);

/// Gradient of the envelope, (T - prox_eps(T))/eps; 1/eps-Lipschitz.
NodeTensor moreau_grad(const PotentialSpec& spec, double eps, const NodeTensor& t);

/// Convex conjugate of the density.
/// Zero -> indicator of {O}; Quadratic(a>0) -> |G|^2/(2a);
/// YieldConstrained -> |G|^2/(2a) if |G| <= a sigma, else sigma|G| - a sigma^2/2.
double conjugate_pointwise(const PotentialSpec& spec, const NodeTensor& g);

struct SubgradientCheck {
  bool ok = false;
  /// Worst violation of P(T~) >= P(T) + G:(T~ - T) over the sampled T~;
  /// positive means the subgradient inequality failed by that much.
  double worst_defect = 0.0;
};

/// Samples `samples` random feasible T~ and verifies the subgradient
/// inequality for G at T. Infeasible T raises InvalidArgumentError.
SubgradientCheck subgradient_check(const PotentialSpec& spec, const NodeTensor& t,
                                   const NodeTensor& g, int samples, std::uint64_t seed,
                                   double tol = 1e-10);

}  // namespace vep
