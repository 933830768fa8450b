// Deterministic computation of the joint characteristic exponent
//   Psi_t(theta) = sum_atoms w int_0^q int_R |sum_j theta_j G_tj(z,v,u)|^a du dv
// and the residual checks built on it: self-similarity, stationary
// increments, and the five equivalent kernel parameterizations.
#pragma once

#include <span>
#include <vector>

#include "fracstable/kernel.hpp"
#include "fracstable/quadrature.hpp"

namespace fracstable {

struct CharExponentResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  bool divergent = false;
};

CharExponentResult char_exponent(const KernelSpec& spec,
                                 std::span<const double> t,
                                 std::span<const double> theta,
                                 const QuadratureConfig& cfg);

struct ResidualReport {
  double residual = 0.0;
  double lhs = 0.0;   // reference-side exponent
  double rhs = 0.0;   // compared-side exponent
  bool converged = false;
};

/// |Psi(a t, theta) - a^{alpha H} Psi(t, theta)| / max(Psi(t, theta), floor).
ResidualReport self_similarity_residual(const KernelSpec& spec, double a,
                                        std::span<const double> t,
                                        std::span<const double> theta,
                                        const QuadratureConfig& cfg);

/// Joint exponent of theta applied to (X(t_j + h) - X(t_1 + h)) versus the
/// unshifted vector; exact equality up to quadrature.
ResidualReport stationary_increments_residual(const KernelSpec& spec, double h,
                                              std::span<const double> t,
                                              std::span<const double> theta,
                                              const QuadratureConfig& cfg);

/// The five equivalent parameterizations of the ring-kernel
/// representation. `ring_w_inverse` integrates w over (e^{-q}, 1), the
/// measure the reversed-orientation bound denotes.
enum class RepresentationForm {
  exp_section,     // e^{-kv} K(e^v(t+u)), v in (0, q)
  ring_w,          // w^{-H} K(w(t+u)), w in (1, e^q)
  ring_w_inverse,  // w^{H-2/a} K(w^{-1}(t+u)), w in (e^{-q}, 1)
  shift,           // w^{-H-1/a} (K(wt+u) - K(u)), w in (1, e^q)
  shift_inverse    // w^{H-1/a} (K(w^{-1}t+u) - K(u)), w in (1, e^q)
};

/// Joint exponent computed under one parameterization (requires s = 1).
CharExponentResult representation_exponent(const KernelSpec& spec,
                                           RepresentationForm form,
                                           std::span<const double> t,
                                           std::span<const double> theta,
                                           const QuadratureConfig& cfg);

ResidualReport representation_equivalence(const KernelSpec& spec,
                                          RepresentationForm rep_a,
                                          RepresentationForm rep_b,
                                          std::span<const double> t,
                                          std::span<const double> theta,
                                          const QuadratureConfig& cfg);

}  // namespace fracstable
