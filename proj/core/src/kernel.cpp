#include "fracstable/kernel.hpp"

#include <cmath>

namespace fracstable {

KernelSpec embed_mixed_lfsm(const MixedLfsmSpec& m) {
  std::vector<AtomSpec> atoms;
  atoms.reserve(m.atoms.size());
  double kap = m.params.kappa();
  for (const auto& a : m.atoms) {
    if (kap != 0.0) {
      atoms.emplace_back(a.weight, 1.0, 1, 1.0, ProfileFn::constant(1.0, a.F1),
                         ProfileFn::constant(1.0, a.F2), 0.0);
    } else {
      // kappa = 0: the jump coefficient becomes the plus-side profile and
      // the log coefficient carries the original F1.
      atoms.emplace_back(a.weight, 1.0, 1, 1.0, ProfileFn::constant(1.0, a.F2),
                         ProfileFn::constant(1.0, 0.0), a.F1);
    }
  }
  return KernelSpec(m.params, std::move(atoms), "mixed-lfsm");
}

namespace {

ProfileFn rescale_profile(const ProfileFn& f, double s, int b1, double q_new) {
  using Family = ProfileFn::Family;
  double q = f.q();
  if (s > 0.0) {
    // F~(v) = F(s v) on [0, q/s)
    switch (f.family()) {
      case Family::constant:
        return ProfileFn::constant(q_new, f.constant_value());
      case Family::indicator:
        return ProfileFn::indicator(q_new);
      case Family::linear:
        return ProfileFn::tabulated(q_new, {0.0, q});
      case Family::tent:
        return ProfileFn::tabulated(q_new, {0.0, 0.5 * q, 0.0});
      case Family::cosine:
        return ProfileFn::cosine(q_new, f.cosine_frequency() * s,
                                 f.cosine_phase());
      case Family::tabulated:
        return ProfileFn::tabulated(q_new, f.knots());
    }
  } else {
    // F~(v) = b1 * F(q - |s| v), the a.e. reflection absorbing the bracket
    // shift of [-y]_q = -[y]_q - 1.
    double sign = static_cast<double>(b1);
    switch (f.family()) {
      case Family::constant:
        return ProfileFn::constant(q_new, sign * f.constant_value());
      case Family::linear: {
        return ProfileFn::tabulated(q_new, {sign * q, 0.0});
      }
      case Family::tent:
        return ProfileFn::tabulated(q_new, {0.0, sign * 0.5 * q, 0.0});
      case Family::cosine: {
        // b1 * cos(phase + f(q - |s| v)); a sign flip is a phase shift by pi.
        double phase = f.cosine_phase() + f.cosine_frequency() * q;
        if (sign < 0) phase += M_PI;
        return ProfileFn::cosine(q_new, -f.cosine_frequency() * std::fabs(s),
                                 phase);
      }
      case Family::tabulated: {
        std::vector<double> rev(f.knots().rbegin(), f.knots().rend());
        for (double& y : rev) y *= sign;
        return ProfileFn::tabulated(q_new, rev);
      }
      case Family::indicator:
        throw std::invalid_argument(
            "normalize_speed: reflected indicator profile is not "
            "representable in the closed-form family");
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

KernelSpec normalize_speed(const KernelSpec& spec) {
  std::vector<AtomSpec> atoms;
  atoms.reserve(spec.atoms.size());
  for (const auto& a : spec.atoms) {
    if (a.s == 1.0) {
      atoms.push_back(a);
      continue;
    }
    double mag = std::fabs(a.s);
    double q_new = a.q / mag;
    ProfileFn f1 = rescale_profile(a.F1, a.s, a.b1, q_new);
    ProfileFn f2 = rescale_profile(a.F2, a.s, a.b1, q_new);
    atoms.emplace_back(a.weight * mag, q_new, a.b1, 1.0, std::move(f1),
                       std::move(f2), a.F3);
  }
  return KernelSpec(spec.params, std::move(atoms), spec.label);
}

}  // namespace fracstable
