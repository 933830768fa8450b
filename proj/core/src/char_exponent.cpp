#include "fracstable/char_exponent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracstable {

namespace {

constexpr double kResidualFloor = 1e-12;

// Combined linear form sum_i c_i G(z, v, u + o_i) with merged offsets.
struct OffsetCombo {
  std::vector<double> offsets;
  std::vector<double> coeffs;

  bool trivial() const {
    for (double c : coeffs)
      if (c != 0.0) return false;
    return true;
  }
};

OffsetCombo merge_offsets(std::span<const double> offsets,
                          std::span<const double> coeffs) {
  OffsetCombo combo;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    bool found = false;
    for (std::size_t k = 0; k < combo.offsets.size(); ++k) {
      if (combo.offsets[k] == offsets[i]) {
        combo.coeffs[k] += coeffs[i];
        found = true;
        break;
      }
    }
    if (!found) {
      combo.offsets.push_back(offsets[i]);
      combo.coeffs.push_back(coeffs[i]);
    }
  }
  // Drop cancelled terms.
  OffsetCombo out;
  for (std::size_t k = 0; k < combo.offsets.size(); ++k) {
    if (combo.coeffs[k] != 0.0) {
      out.offsets.push_back(combo.offsets[k]);
      out.coeffs.push_back(combo.coeffs[k]);
    }
  }
  return out;
}

OffsetCombo increment_combo(std::span<const double> t,
                            std::span<const double> theta) {
  if (t.size() != theta.size() || t.empty())
    throw std::invalid_argument("t and theta must have equal positive length");
  std::vector<double> offs(t.begin(), t.end());
  std::vector<double> cfs(theta.begin(), theta.end());
  double s = 0.0;
  for (double th : theta) s += th;
  offs.push_back(0.0);
  cfs.push_back(-s);
  return merge_offsets(offs, cfs);
}

CharExponentResult accumulate_atoms(
    const KernelSpec& spec, const QuadratureConfig& cfg,
    const std::function<NormReport(std::size_t, double)>& inner_for_atom_v,
    const std::function<std::pair<double, double>(std::size_t)>& v_range) {
  CharExponentResult out;
  out.converged = true;
  CompensatedSum total;
  int outer_budget = 256;
  double inner_err_max = 0.0;
  for (std::size_t ai = 0; ai < spec.atoms.size(); ++ai) {
    auto [vlo, vhi] = v_range(ai);
    bool atom_ok = true;
    auto f = [&](double v) {
      NormReport r = inner_for_atom_v(ai, v);
      if (r.divergent) out.divergent = true;
      if (!r.converged) atom_ok = false;
      inner_err_max = std::max(inner_err_max, r.error_estimate);
      return r.value;
    };
    int budget = outer_budget;
    GKResult g =
        gk_adaptive(f, vlo, vhi, cfg.abs_tol, 0.5 * cfg.rel_tol, budget);
    if (out.divergent) {
      out.converged = false;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    total.add(spec.atoms[ai].weight * g.value);
    out.error_estimate += spec.atoms[ai].weight *
                          (g.error + inner_err_max * (vhi - vlo));
    out.converged = out.converged && g.converged && atom_ok;
  }
  out.value = total.value();
  return out;
}

}  // namespace

CharExponentResult char_exponent(const KernelSpec& spec,
                                 std::span<const double> t,
                                 std::span<const double> theta,
                                 const QuadratureConfig& cfg) {
  OffsetCombo combo = increment_combo(t, theta);
  if (combo.trivial()) return {0.0, 0.0, true, false};

  double alpha = spec.params.alpha;
  double kap = spec.params.kappa();
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.rel_tol = 0.05 * cfg.rel_tol;

  auto inner = [&](std::size_t ai, double v) {
    LineIntegrand li;
    li.f = [&spec, &combo, ai, v, alpha](double u) {
      double s = 0.0;
      for (std::size_t j = 0; j < combo.offsets.size(); ++j)
        s += combo.coeffs[j] * kernel_value(spec, ai, v, u + combo.offsets[j]);
      return std::pow(std::fabs(s), alpha);
    };
    for (double o : combo.offsets) li.singular_points.push_back(-o);
    li.inner_exponent = kap * alpha;
    li.outer_exponent = (kap - 1.0) * alpha;
    li.log_period = spec.atoms[ai].q / std::fabs(spec.atoms[ai].s);
    return line_integral(li, inner_cfg);
  };
  auto vr = [&](std::size_t ai) {
    return std::pair<double, double>(0.0, spec.atoms[ai].q);
  };
  return accumulate_atoms(spec, cfg, inner, vr);
}

ResidualReport self_similarity_residual(const KernelSpec& spec, double a,
                                        std::span<const double> t,
                                        std::span<const double> theta,
                                        const QuadratureConfig& cfg) {
  if (!(a > 0.0)) throw std::domain_error("self-similarity scale a must be > 0");
  std::vector<double> at(t.begin(), t.end());
  for (double& x : at) x *= a;
  CharExponentResult base = char_exponent(spec, t, theta, cfg);
  CharExponentResult scaled = char_exponent(spec, at, theta, cfg);
  double factor = std::pow(a, spec.params.alpha * spec.params.H);
  ResidualReport rep;
  rep.lhs = scaled.value;
  rep.rhs = factor * base.value;
  rep.converged = base.converged && scaled.converged;
  rep.residual = std::fabs(rep.lhs - rep.rhs) / std::max(base.value, kResidualFloor);
  return rep;
}

ResidualReport stationary_increments_residual(const KernelSpec& spec, double h,
                                              std::span<const double> t,
                                              std::span<const double> theta,
                                              const QuadratureConfig& cfg) {
  if (t.size() != theta.size() || t.empty())
    throw std::invalid_argument("t and theta must have equal positive length");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("t must be strictly increasing");

  auto shifted_exponent = [&](double shift) {
    // theta applied to (X(t_j + shift) - X(t_1 + shift)).
    std::vector<double> offs, cfs;
    double tot = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      offs.push_back(t[j] + shift);
      cfs.push_back(theta[j]);
      tot += theta[j];
    }
    offs.push_back(t[0] + shift);
    cfs.push_back(-tot);

    OffsetCombo combo = merge_offsets(offs, cfs);
    if (combo.trivial()) return CharExponentResult{0.0, 0.0, true, false};
    double alpha = spec.params.alpha;
    double kap = spec.params.kappa();
    QuadratureConfig inner_cfg = cfg;
    inner_cfg.rel_tol = 0.05 * cfg.rel_tol;
    auto inner = [&](std::size_t ai, double v) {
      LineIntegrand li;
      li.f = [&spec, combo, ai, v, alpha](double u) {
        double s = 0.0;
        for (std::size_t j = 0; j < combo.offsets.size(); ++j)
          s += combo.coeffs[j] *
               kernel_value(spec, ai, v, u + combo.offsets[j]);
        return std::pow(std::fabs(s), alpha);
      };
      for (double o : combo.offsets) li.singular_points.push_back(-o);
      li.inner_exponent = kap * alpha;
      li.outer_exponent = (kap - 1.0) * alpha;
      li.log_period = spec.atoms[ai].q / std::fabs(spec.atoms[ai].s);
      return line_integral(li, inner_cfg);
    };
    auto vr = [&](std::size_t ai) {
      return std::pair<double, double>(0.0, spec.atoms[ai].q);
    };
    return accumulate_atoms(spec, cfg, inner, vr);
  };

  CharExponentResult base = shifted_exponent(0.0);
  CharExponentResult moved = shifted_exponent(h);
  ResidualReport rep;
  rep.lhs = moved.value;
  rep.rhs = base.value;
  rep.converged = base.converged && moved.converged;
  rep.residual =
      std::fabs(rep.lhs - rep.rhs) / std::max(base.value, kResidualFloor);
  return rep;
}

CharExponentResult representation_exponent(const KernelSpec& spec,
                                           RepresentationForm form,
                                           std::span<const double> t,
                                           std::span<const double> theta,
                                           const QuadratureConfig& cfg) {
  for (const auto& a : spec.atoms)
    if (a.s != 1.0)
      throw std::invalid_argument(
          "representation forms are defined for unit-speed kernels");
  OffsetCombo combo = increment_combo(t, theta);
  if (combo.trivial()) return {0.0, 0.0, true, false};

  double alpha = spec.params.alpha;
  double H = spec.params.H;
  double kap = spec.params.kappa();
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.rel_tol = 0.05 * cfg.rel_tol;

  // Inner integrand: |sum_i c_i K(scale * (u + o_i) + shift_i)|^alpha with a
  // form-dependent w-prefactor; singular u where the K argument vanishes.
  auto inner = [&](std::size_t ai, double w) {
    double scale = 1.0, wpow = 1.0;
    bool shift_form = false;
    switch (form) {
      case RepresentationForm::exp_section:
        scale = std::exp(w);
        wpow = std::exp(-kap * alpha * w);
        break;
      case RepresentationForm::ring_w:
        scale = w;
        wpow = std::pow(w, -alpha * H);
        break;
      case RepresentationForm::ring_w_inverse:
        scale = 1.0 / w;
        wpow = std::pow(w, alpha * H - 2.0);
        break;
      case RepresentationForm::shift:
        scale = w;
        wpow = std::pow(w, -alpha * H - 1.0);
        shift_form = true;
        break;
      case RepresentationForm::shift_inverse:
        scale = 1.0 / w;
        wpow = std::pow(w, alpha * H - 1.0);
        shift_form = true;
        break;
    }
    LineIntegrand li;
    if (!shift_form) {
      li.f = [&spec, &combo, ai, alpha, scale, wpow](double u) {
        double s = 0.0;
        for (std::size_t j = 0; j < combo.offsets.size(); ++j)
          s += combo.coeffs[j] *
               ring_kernel_value(spec, ai, scale * (u + combo.offsets[j]));
        return wpow * std::pow(std::fabs(s), alpha);
      };
      for (double o : combo.offsets) li.singular_points.push_back(-o);
    } else {
      li.f = [&spec, &combo, ai, alpha, scale, wpow](double u) {
        double s = 0.0;
        for (std::size_t j = 0; j < combo.offsets.size(); ++j)
          s += combo.coeffs[j] *
               ring_kernel_value(spec, ai, u + scale * combo.offsets[j]);
        return wpow * std::pow(std::fabs(s), alpha);
      };
      for (double o : combo.offsets) li.singular_points.push_back(-scale * o);
    }
    li.inner_exponent = kap * alpha;
    li.outer_exponent = (kap - 1.0) * alpha;
    li.log_period = spec.atoms[ai].q;
    return line_integral(li, inner_cfg);
  };
  auto vr = [&](std::size_t ai) -> std::pair<double, double> {
    double q = spec.atoms[ai].q;
    switch (form) {
      case RepresentationForm::exp_section:
        return {0.0, q};
      case RepresentationForm::ring_w:
      case RepresentationForm::shift:
      case RepresentationForm::shift_inverse:
        return {1.0, std::exp(q)};
      case RepresentationForm::ring_w_inverse:
        return {std::exp(-q), 1.0};
    }
    return {0.0, q};
  };
  return accumulate_atoms(spec, cfg, inner, vr);
}

ResidualReport representation_equivalence(const KernelSpec& spec,
                                          RepresentationForm rep_a,
                                          RepresentationForm rep_b,
                                          std::span<const double> t,
                                          std::span<const double> theta,
                                          const QuadratureConfig& cfg) {
  CharExponentResult A = representation_exponent(spec, rep_a, t, theta, cfg);
  CharExponentResult B = representation_exponent(spec, rep_b, t, theta, cfg);
  ResidualReport rep;
  rep.lhs = A.value;
  rep.rhs = B.value;
  rep.converged = A.converged && B.converged;
  rep.residual = std::fabs(A.value - B.value) /
                 std::max(std::max(A.value, B.value), kResidualFloor);
  return rep;
}

}  // namespace fracstable
