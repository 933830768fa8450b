// Canonical kernel representations: stable parameters, weighted atoms with
// profile pairs, and pointwise evaluation of the kernel G, its ring form K,
// and increments. Atom sets are finite by design; continuous mixing
// measures enter through quadrature atoms.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracstable/profile.hpp"
#include "fracstable/scalar.hpp"

namespace fracstable {

struct StableParams {
  double alpha;
  double H;

  StableParams(double alpha_, double H_) : alpha(alpha_), H(H_) {
    if (!(alpha > 0.0 && alpha < 2.0))
      throw std::invalid_argument("alpha must lie in (0, 2)");
    if (!(H > 0.0 && H < 1.0))
      throw std::invalid_argument("H must lie in (0, 1)");
  }

  /// kappa = H - 1/alpha, always recomputed from (alpha, H).
  double kappa() const { return H - 1.0 / alpha; }
};

struct AtomSpec {
  double weight;
  double q;
  int b1;
  double s;
  ProfileFn F1;
  ProfileFn F2;
  double F3;

  AtomSpec(double weight_, double q_, int b1_, double s_, ProfileFn F1_,
           ProfileFn F2_, double F3_ = 0.0)
      : weight(weight_), q(q_), b1(b1_), s(s_), F1(std::move(F1_)),
        F2(std::move(F2_)), F3(F3_) {
    if (!(weight > 0.0) || !std::isfinite(weight))
      throw std::invalid_argument("atom weight must be positive and finite");
    if (!(q > 0.0) || !std::isfinite(q))
      throw std::invalid_argument("atom period must be positive and finite");
    if (b1 != 1 && b1 != -1)
      throw std::invalid_argument("b1 must be +1 or -1");
    if (s == 0.0 || !std::isfinite(s))
      throw std::invalid_argument("speed s must be nonzero and finite");
    if (F1.q() != q || F2.q() != q)
      throw std::invalid_argument("profile periods must equal the atom period");
    if (!std::isfinite(F3))
      throw std::invalid_argument("F3 must be finite");
  }
};

struct KernelSpec {
  StableParams params;
  std::vector<AtomSpec> atoms;
  std::string label;

  KernelSpec(StableParams params_, std::vector<AtomSpec> atoms_,
             std::string label_ = "")
      : params(params_), atoms(std::move(atoms_)), label(std::move(label_)) {
    if (atoms.empty())
      throw std::invalid_argument("kernel spec needs at least one atom");
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& a : atoms) w += a.weight;
    return w;
  }
};

struct MixedLfsmAtom {
  double weight;
  double F1;
  double F2;
};

struct MixedLfsmSpec {
  StableParams params;
  std::vector<MixedLfsmAtom> atoms;
};

/// True when the logarithmic term of the atom participates in the kernel
/// (requires b1 = 1, kappa = 0, F3 != 0).
inline bool log_term_active(const AtomSpec& atom, const StableParams& params) {
  return atom.b1 == 1 && params.kappa() == 0.0 && atom.F3 != 0.0;
}

/// Kernel G(z, v, u) of the speed-s canonical representation.
/// At u = 0 the power terms vanish by convention; if the log term is
/// active there, the point is a genuine singularity.
inline double kernel_value(const KernelSpec& spec, std::size_t atom_index,
                           double v, double u) {
  const AtomSpec& a = spec.atoms.at(atom_index);
  if (!(v >= 0.0 && v < a.q))
    throw std::domain_error("kernel_value: v outside [0, q)");
  double kap = spec.params.kappa();
  if (u == 0.0) {
    if (log_term_active(a, spec.params))
      throw singular_point_error("kernel_value: log singularity at u = 0");
    return 0.0;
  }
  auto [n, r] = split_mod(v + a.s * std::log(std::fabs(u)), a.q);
  double val = sign_pow(a.b1, n) * (a.F1(r) * signed_power(u, kap, Side::plus) +
                                    a.F2(r) * signed_power(u, kap, Side::minus));
  if (a.b1 == 1 && kap == 0.0)
    val += a.F3 * std::log(std::fabs(u));
  return val;
}

/// Ring kernel K(z, u): the v = 0 section with unit speed. Satisfies
/// G(z, v, u) = e^{-kappa v} K(z, e^v u) when s = 1 and the log term is
/// absent; with an active log term the identity picks up -F3 * v.
inline double ring_kernel_value(const KernelSpec& spec, std::size_t atom_index,
                                double u) {
  const AtomSpec& a = spec.atoms.at(atom_index);
  double kap = spec.params.kappa();
  if (u == 0.0) {
    if (log_term_active(a, spec.params))
      throw singular_point_error("ring_kernel_value: log singularity at u = 0");
    return 0.0;
  }
  auto [n, r] = split_mod(std::log(std::fabs(u)), a.q);
  double val = sign_pow(a.b1, n) * (a.F1(r) * signed_power(u, kap, Side::plus) +
                                    a.F2(r) * signed_power(u, kap, Side::minus));
  if (a.b1 == 1 && kap == 0.0)
    val += a.F3 * std::log(std::fabs(u));
  return val;
}

/// G_t(z, v, u) = G(z, v, t + u) - G(z, v, u).
inline double increment_value(const KernelSpec& spec, std::size_t atom_index,
                              double v, double t, double u) {
  return kernel_value(spec, atom_index, v, t + u) -
         kernel_value(spec, atom_index, v, u);
}

/// Embeds a mixed LFSM into the canonical atom representation
/// (b1 = 1, q = 1, s = 1 per atom; constant profiles, with the kappa = 0
/// branch routed through the log coefficient).
KernelSpec embed_mixed_lfsm(const MixedLfsmSpec& m);

/// Rewrites every atom at unit speed: q -> q/|s|, weight -> weight*|s|,
/// with the profile argument rescaled (and reflected for s < 0). The
/// transform is exact for every closed form except a reflected indicator,
/// which has no representative in the family.
KernelSpec normalize_speed(const KernelSpec& spec);

}  // namespace fracstable
