#include "fracstable/flow.hpp"

#include <algorithm>
#include <cmath>

#include "fracstable/rng.hpp"

namespace fracstable {

double cocycle_eval(const FlowTriple& t, std::size_t atom_index, double v,
                    double c) {
  const auto& a = t.flow.atoms.at(atom_index);
  if (!(c > 0.0)) throw std::domain_error("cocycle_eval: c must be positive");
  double x = v + a.s * std::log(c);
  double core = sign_pow(t.b1.at(atom_index), int_part(x, a.q));
  if (!t.b_gen) return core;
  double vp = frac_part(x, a.q);
  return t.b_tilde(atom_index, vp) / t.b_tilde(atom_index, v) * core;
}

double semi_additive_1_eval(const FlowTriple& t, std::size_t atom_index,
                            double v, double c) {
  const auto& a = t.flow.atoms.at(atom_index);
  double vp = frac_part(v + a.s * std::log(c), a.q);
  return t.g_tilde(atom_index, vp) - t.g_tilde(atom_index, v) / c;
}

double semi_additive_2_eval(const FlowTriple& t, std::size_t atom_index,
                            double v, double c, double kappa) {
  const auto& a = t.flow.atoms.at(atom_index);
  double x = v + a.s * std::log(c);
  double vp = frac_part(x, a.q);
  double val = cocycle_eval(t, atom_index, v, c) * t.j_tilde(atom_index, vp) -
               std::pow(c, -kappa) * t.j_tilde(atom_index, v);
  if (t.b1.at(atom_index) == 1 && kappa == 0.0) {
    double j1 = t.j1.at(atom_index);
    if (j1 != 0.0)
      val += j1 / t.b_tilde(atom_index, v) *
             static_cast<double>(int_part(x, a.q));
  }
  return val;
}

std::vector<FlowSample> draw_flow_samples(const CyclicFlow& flow,
                                          std::size_t count, std::uint64_t seed,
                                          double c_lo, double c_hi) {
  RngStream rng(seed, 0);
  std::vector<FlowSample> out;
  out.reserve(count);
  double log_lo = std::log(c_lo), log_hi = std::log(c_hi);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t ai = flow.atoms.size() > 1
                         ? static_cast<std::size_t>(rng.next_u64() %
                                                    flow.atoms.size())
                         : 0;
    double v = rng.next_unit() * flow.atoms[ai].q;
    double c1 = std::exp(log_lo + (log_hi - log_lo) * rng.next_unit());
    double c2 = std::exp(log_lo + (log_hi - log_lo) * rng.next_unit());
    out.push_back({ai, v, c1, c2});
  }
  return out;
}

double verify_flow_identity(const CyclicFlow& flow,
                            const std::vector<FlowSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    double q = flow.atoms.at(s.atom_index).q;
    double lhs = apply_flow(flow, s.atom_index, s.v, s.c1 * s.c2);
    double rhs =
        apply_flow(flow, s.atom_index, apply_flow(flow, s.atom_index, s.v, s.c2),
                   s.c1);
    worst = std::max(worst, circular_distance(lhs, rhs, q));
  }
  return worst;
}

double verify_cocycle(const FlowTriple& t,
                      const std::vector<FlowSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    double lhs = cocycle_eval(t, s.atom_index, s.v, s.c1 * s.c2);
    double v1 = apply_flow(t.flow, s.atom_index, s.v, s.c1);
    double rhs = cocycle_eval(t, s.atom_index, s.v, s.c1) *
                 cocycle_eval(t, s.atom_index, v1, s.c2);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double verify_semi_additive_1(const FlowTriple& t,
                              const std::vector<FlowSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    double lhs = semi_additive_1_eval(t, s.atom_index, s.v, s.c1 * s.c2);
    double v1 = apply_flow(t.flow, s.atom_index, s.v, s.c1);
    double rhs = semi_additive_1_eval(t, s.atom_index, s.v, s.c1) / s.c2 +
                 semi_additive_1_eval(t, s.atom_index, v1, s.c2);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double verify_semi_additive_2(const FlowTriple& t, const StableParams& params,
                              const std::vector<FlowSample>& samples) {
  double kap = params.kappa();
  double worst = 0.0;
  for (const auto& s : samples) {
    double lhs = semi_additive_2_eval(t, s.atom_index, s.v, s.c1 * s.c2, kap);
    double v1 = apply_flow(t.flow, s.atom_index, s.v, s.c1);
    double rhs = std::pow(s.c2, -kap) *
                     semi_additive_2_eval(t, s.atom_index, s.v, s.c1, kap) +
                 cocycle_eval(t, s.atom_index, s.v, s.c1) *
                     semi_additive_2_eval(t, s.atom_index, v1, s.c2, kap);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double generation_residual(const KernelSpec& spec,
                           const std::vector<double>& c_list,
                           std::size_t grid_points, std::uint64_t seed) {
  CyclicFlow flow = CyclicFlow::from_spec(spec);
  double kap = spec.params.kappa();
  RngStream rng(seed, 0);
  double worst = 0.0;
  for (std::size_t ai = 0; ai < spec.atoms.size(); ++ai) {
    const AtomSpec& atom = spec.atoms[ai];
    for (std::size_t k = 0; k < grid_points; ++k) {
      double v = rng.next_unit() * atom.q;
      // |u| in [0.05, 8], both signs, away from the singular point at 0.
      double mag = 0.05 * std::pow(160.0, rng.next_unit());
      double u = (rng.next_u64() & 1) ? mag : -mag;
      for (double c : c_list) {
        double lhs = std::pow(c, -kap) * kernel_value(spec, ai, v, c * u);
        double vp = apply_flow(flow, ai, v, c);
        double bc = sign_pow(atom.b1, int_part(v + atom.s * std::log(c), atom.q));
        double jc = (atom.b1 == 1 && kap == 0.0)
                        ? atom.F3 * std::log(c)
                        : 0.0;
        double rhs = bc * kernel_value(spec, ai, vp, u) + jc;
        double denom = std::max(1.0, std::fabs(lhs));
        worst = std::max(worst, std::fabs(lhs - rhs) / denom);
      }
    }
  }
  return worst;
}

}  // namespace fracstable
