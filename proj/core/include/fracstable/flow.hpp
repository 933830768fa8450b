// The cyclic normal-form flow psi_c(z, v) = (z, {v + s ln c}_q), its
// cocycles and 1-/2-semi-additive functionals, exact constructors for all
// three from generator functions, and the residual check of the generation
// relation that ties the flow to the canonical kernel.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fracstable/kernel.hpp"
#include "fracstable/scalar.hpp"

namespace fracstable {

struct CyclicFlow {
  struct AtomFlow {
    double q;
    double s;
  };
  std::vector<AtomFlow> atoms;

  static CyclicFlow from_spec(const KernelSpec& spec) {
    CyclicFlow f;
    for (const auto& a : spec.atoms) f.atoms.push_back({a.q, a.s});
    return f;
  }
};

/// {v + s ln c}_q.
inline double apply_flow(const CyclicFlow& flow, std::size_t atom_index,
                         double v, double c) {
  const auto& a = flow.atoms.at(atom_index);
  if (!(c > 0.0)) throw std::domain_error("apply_flow: c must be positive");
  if (!(v >= 0.0 && v < a.q))
    throw std::domain_error("apply_flow: v outside [0, q)");
  if (c == 1.0) return v;
  return frac_part(v + a.s * std::log(c), a.q);
}

/// Generator data for functionals of one atom's flow. Defaults produce the
/// canonical triple of the kernel representation: trivial sign generator,
/// zero shift generator, zero additive generator.
struct FlowTriple {
  CyclicFlow flow;
  std::vector<int> b1;                               // per atom, +-1
  std::function<double(std::size_t, double)> b_gen;  // optional, +-1 valued
  std::function<double(std::size_t, double)> g_gen;
  std::function<double(std::size_t, double)> j_gen;
  std::vector<double> j1;                            // per atom

  static FlowTriple canonical(const KernelSpec& spec) {
    FlowTriple t;
    t.flow = CyclicFlow::from_spec(spec);
    for (const auto& a : spec.atoms) {
      t.b1.push_back(a.b1);
      t.j1.push_back(0.0);
    }
    return t;
  }

  double b_tilde(std::size_t i, double v) const {
    return b_gen ? b_gen(i, v) : 1.0;
  }
  double g_tilde(std::size_t i, double v) const {
    return g_gen ? g_gen(i, v) : 0.0;
  }
  double j_tilde(std::size_t i, double v) const {
    return j_gen ? j_gen(i, v) : 0.0;
  }
};

/// Cocycle b_c(z, v) = (b~(z, psi_c v) / b~(z, v)) b1^{[v + s ln c]_q}.
double cocycle_eval(const FlowTriple& t, std::size_t atom_index, double v,
                    double c);

/// 1-semi-additive functional g_c(z, v) = g~(z, psi_c v) - c^{-1} g~(z, v).
double semi_additive_1_eval(const FlowTriple& t, std::size_t atom_index,
                            double v, double c);

/// 2-semi-additive functional
///   j_c = b_c j~(psi_c v) - c^{-kappa} j~(v)
///       + j1 b~(v)^{-1} [v + s ln c]_q 1{b1=1} 1{kappa=0}.
double semi_additive_2_eval(const FlowTriple& t, std::size_t atom_index,
                            double v, double c, double kappa);

struct FlowSample {
  std::size_t atom_index;
  double v;
  double c1;
  double c2;
};

/// Draws a deterministic batch of samples (v in [0,q), c in [c_lo, c_hi])
/// for the residual checks below.
std::vector<FlowSample> draw_flow_samples(const CyclicFlow& flow,
                                          std::size_t count, std::uint64_t seed,
                                          double c_lo = 0.1, double c_hi = 10.0);

/// max over samples of d(psi_{c1 c2}(v), psi_{c1}(psi_{c2}(v))) in the
/// circular metric.
double verify_flow_identity(const CyclicFlow& flow,
                            const std::vector<FlowSample>& samples);

/// max |b_{c1 c2}(v) - b_{c1}(v) b_{c2}(psi_{c1} v)|.
double verify_cocycle(const FlowTriple& t,
                      const std::vector<FlowSample>& samples);

/// max |g_{c1 c2}(v) - c2^{-1} g_{c1}(v) - g_{c2}(psi_{c1} v)|.
double verify_semi_additive_1(const FlowTriple& t,
                              const std::vector<FlowSample>& samples);

/// max |j_{c1 c2}(v) - c2^{-kappa} j_{c1}(v) - b_{c1}(v) j_{c2}(psi_{c1} v)|.
double verify_semi_additive_2(const FlowTriple& t, const StableParams& params,
                              const std::vector<FlowSample>& samples);

/// Residual of the generation relation
///   c^{-kappa} G(z, v, c u) = b_c(z, v) G(psi_c(z, v), u) + j_c(z, v)
/// with the canonical triple b_c = b1^{[v + s ln c]_q}, g_c = 0,
/// j_c = 1{b1=1} 1{kappa=0} F3 ln c, and unit Radon-Nikodym factor.
/// Evaluated on a deterministic grid avoiding active singularities;
/// returns the max residual relative to max(1, |lhs|).
double generation_residual(const KernelSpec& spec,
                           const std::vector<double>& c_list,
                           std::size_t grid_points, std::uint64_t seed = 1);

}  // namespace fracstable
