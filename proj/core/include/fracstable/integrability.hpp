// Well-definedness checks: the integrand-space norm whose finiteness is
// equivalent to the process being well-defined, the L^alpha scale of a
// single increment, the sufficient-condition checklist, and the explicit
// bound for the harmonizable cosine kernel.
#pragma once

#include <vector>

#include "fracstable/kernel.hpp"
#include "fracstable/quadrature.hpp"

namespace fracstable {

/// alpha-power of the integrand-space norm,
///   sum_atoms weight * int_1^{e^q} int_R h^{-alpha H - 1}
///                      |K(z, u+h) - K(z, u)|^alpha du dh.
/// Atoms with s != 1 are first rewritten at unit speed (an exact,
/// law-preserving transform). The h integral uses fixed 64-point
/// Gauss-Legendre panels on dyadic pieces; the u integral is adaptive with
/// splits at 0 and -h.
NormReport integrand_space_norm(const KernelSpec& spec,
                                const QuadratureConfig& cfg);

/// Scale parameter sigma(t) of X(t):
///   (sum_atoms weight * int_0^q int_R |G_t(z,v,u)|^alpha du dv)^{1/alpha}.
NormReport increment_scale(const KernelSpec& spec, double t,
                           const QuadratureConfig& cfg);

struct SufficientConditions {
  bool bounded = false;               // sup |F_i| finite
  double sup_bound = 0.0;
  bool abs_continuous = false;        // ess sup |F_i'| finite
  double deriv_bound = 0.0;
  bool boundary_match = false;        // F_i(0) = b1 * F_i(q-)
  bool boundary_required = false;     // only binding when kappa >= 0
  bool sufficient = false;
};

/// Checklist of the sufficient conditions for membership in the integrand
/// space. A failed checklist is not a proof of ill-definedness; the
/// conditions are sufficient only.
SufficientConditions sufficient_conditions(const AtomSpec& atom,
                                           const StableParams& params);

struct LambdaAtom {
  double z;
  double weight;
};

/// Explicit upper bound certifying well-definedness of the harmonizable
/// cosine kernel at t = 1:
///   2^alpha (sum w) I1 + 2^alpha (sum |z|^alpha w) I2,
/// with I1 = int |(1+u)_+^kappa - u_+^kappa|^alpha du and
/// I2 = int u_+^{kappa alpha} |ln|1+u| - ln|u||^alpha du.
NormReport harmonizable_bound(const std::vector<LambdaAtom>& lambda_atoms,
                              const StableParams& params,
                              const QuadratureConfig& cfg);

}  // namespace fracstable
