#include "fracstable/integrability.hpp"

#include <algorithm>
#include <cmath>

#include "fracstable/char_exponent.hpp"

namespace fracstable {

NormReport integrand_space_norm(const KernelSpec& spec_in,
                                const QuadratureConfig& cfg) {
  KernelSpec spec = normalize_speed(spec_in);
  double alpha = spec.params.alpha;
  double H = spec.params.H;
  double kap = spec.params.kappa();

  NormReport out;
  out.converged = true;
  CompensatedSum total;
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.rel_tol = 0.05 * cfg.rel_tol;

  for (std::size_t ai = 0; ai < spec.atoms.size(); ++ai) {
    const AtomSpec& atom = spec.atoms[ai];
    double hi = std::exp(atom.q);

    auto shifted_norm = [&](double h) {
      LineIntegrand li;
      li.f = [&spec, ai, h, alpha](double u) {
        double d = ring_kernel_value(spec, ai, u + h) -
                   ring_kernel_value(spec, ai, u);
        return std::pow(std::fabs(d), alpha);
      };
      li.singular_points = {0.0, -h};
      li.inner_exponent = kap * alpha;
      li.outer_exponent = (kap - 1.0) * alpha;
      li.log_period = atom.q;
      return line_integral(li, inner_cfg);
    };

    // Fixed 64-point Gauss-Legendre per dyadic h-panel; the integrand is
    // smooth in h.
    double atom_value = 0.0;
    double atom_err = 0.0;
    bool atom_ok = true;
    bool atom_div = false;
    double lo = 1.0;
    while (lo < hi && !atom_div) {
      double up = std::min(2.0 * lo, hi);
      double piece = gauss_fixed(
          [&](double h) {
            NormReport r = shifted_norm(h);
            if (r.divergent) atom_div = true;
            if (!r.converged) atom_ok = false;
            atom_err = std::max(atom_err, r.error_estimate);
            return std::pow(h, -alpha * H - 1.0) * r.value;
          },
          lo, up, 64);
      atom_value += piece;
      out.pieces.push_back({lo, up, piece, atom_err});
      lo = up;
    }
    if (atom_div) {
      out.divergent = true;
      out.converged = false;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    total.add(atom.weight * atom_value);
    out.error_estimate += atom.weight * atom_err * (hi - 1.0);
    out.converged = out.converged && atom_ok;
  }
  out.value = total.value();
  return out;
}

NormReport increment_scale(const KernelSpec& spec, double t,
                           const QuadratureConfig& cfg) {
  NormReport out;
  if (t == 0.0) {
    out.converged = true;
    return out;
  }
  double tv[1] = {t};
  double th[1] = {1.0};
  CharExponentResult psi = char_exponent(spec, tv, th, cfg);
  out.converged = psi.converged;
  out.divergent = psi.divergent;
  if (psi.divergent) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  double alpha = spec.params.alpha;
  out.value = std::pow(psi.value, 1.0 / alpha);
  // First-order error propagation through the 1/alpha power.
  if (psi.value > 0.0)
    out.error_estimate =
        out.value * psi.error_estimate / (alpha * psi.value);
  return out;
}

SufficientConditions sufficient_conditions(const AtomSpec& atom,
                                           const StableParams& params) {
  SufficientConditions sc;
  double kap = params.kappa();

  sc.sup_bound = std::max(atom.F1.sup_abs(), atom.F2.sup_abs());
  sc.bounded = std::isfinite(sc.sup_bound);

  auto d1 = atom.F1.derivative_sup_abs();
  auto d2 = atom.F2.derivative_sup_abs();
  sc.abs_continuous = d1.has_value() && d2.has_value();
  if (sc.abs_continuous) sc.deriv_bound = std::max(*d1, *d2);

  double b1 = static_cast<double>(atom.b1);
  sc.boundary_match =
      atom.F1.value_at_zero() == b1 * atom.F1.left_limit_at_period() &&
      atom.F2.value_at_zero() == b1 * atom.F2.left_limit_at_period();
  sc.boundary_required = kap >= 0.0;

  sc.sufficient = sc.bounded && sc.abs_continuous &&
                  (!sc.boundary_required || sc.boundary_match);
  return sc;
}

NormReport harmonizable_bound(const std::vector<LambdaAtom>& lambda_atoms,
                              const StableParams& params,
                              const QuadratureConfig& cfg) {
  NormReport out;
  double alpha = params.alpha;
  double kap = params.kappa();

  double w_sum = 0.0;
  double zw_sum = 0.0;
  for (const auto& a : lambda_atoms) {
    if (!std::isfinite(a.z) || !std::isfinite(a.weight) || a.weight <= 0.0)
      throw std::invalid_argument(
          "harmonizable_bound: lambda atoms need finite z and positive "
          "finite weight");
    w_sum += a.weight;
    zw_sum += std::pow(std::fabs(a.z), alpha) * a.weight;
  }
  if (!std::isfinite(w_sum) || !std::isfinite(zw_sum))
    throw std::invalid_argument("harmonizable_bound: divergent moment sums");
  if (lambda_atoms.empty()) {
    out.converged = true;
    return out;
  }

  LineIntegrand inc;
  inc.f = [alpha, kap](double u) {
    double d = signed_power(1.0 + u, kap, Side::plus) -
               signed_power(u, kap, Side::plus);
    return std::pow(std::fabs(d), alpha);
  };
  inc.singular_points = {0.0, -1.0};
  inc.inner_exponent = kap * alpha;
  inc.outer_exponent = (kap - 1.0) * alpha;
  NormReport I1 = line_integral(inc, cfg);

  LineIntegrand logdiff;
  logdiff.f = [alpha, kap](double u) {
    if (u <= 0.0) return 0.0;
    double d = std::log1p(1.0 / u);
    return std::pow(u, kap * alpha) * std::pow(std::fabs(d), alpha);
  };
  logdiff.singular_points = {0.0, -1.0};
  logdiff.inner_exponent = kap * alpha;
  logdiff.outer_exponent = (kap - 1.0) * alpha;
  NormReport I2 = line_integral(logdiff, cfg);

  double two_a = std::pow(2.0, alpha);
  out.value = two_a * w_sum * I1.value + two_a * zw_sum * I2.value;
  out.error_estimate =
      two_a * (w_sum * I1.error_estimate + zw_sum * I2.error_estimate);
  out.converged = I1.converged && I2.converged;
  out.divergent = I1.divergent || I2.divergent;
  return out;
}

}  // namespace fracstable
