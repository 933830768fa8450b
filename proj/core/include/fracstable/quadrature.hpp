// Quadrature for the improper integrals behind every norm and
// characteristic-exponent computation. The integrands are nonnegative,
// blow up like |u - p|^lambda (lambda > -1) at finitely many points, and
// decay like a power with log-periodic modulation in the far field. The
// engine splits the line at the singular points, climbs geometric ladders
// toward each one and out to the tails, and extrapolates the remainders
// with the measured shell-decay ratio.
#pragma once

#include <functional>
#include <vector>

#include "fracstable/scalar.hpp"

namespace fracstable {

struct QuadratureConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  /// Panel budget per one-dimensional integral (adaptive refinement stops
  /// once exhausted and the result is reported as not converged).
  int max_subdivisions = 6000;
  /// Shells past this radius are never integrated; the remainder comes
  /// from the power-law tail model.
  double u_tail_cutoff = 1e9;
  /// Inner exclusion radius around each algebraic singular point.
  double singularity_padding = 1e-12;
};

struct PieceInfo {
  double lo;
  double hi;
  double value;
  double error;
};

struct NormReport {
  double value = 0.0;
  bool converged = false;
  bool divergent = false;
  double error_estimate = 0.0;
  std::vector<PieceInfo> pieces;

  enum class Verdict { finite, divergent, inconclusive };
  Verdict verdict() const {
    if (divergent) return Verdict::divergent;
    return converged ? Verdict::finite : Verdict::inconclusive;
  }
};

struct GKResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod 7/15 on a finite interval. `budget` is shared
/// across calls and decremented per panel.
GKResult gk_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int& budget);

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed once per n and cached.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

/// Fixed n-point Gauss-Legendre estimate on [a, b].
double gauss_fixed(const std::function<double(double)>& f, double a, double b,
                   int n);

/// A nonnegative integrand over the whole line.
struct LineIntegrand {
  std::function<double(double)> f;
  /// Points where f may blow up (integrably).
  std::vector<double> singular_points;
  /// Local model f ~ C |u - p|^inner_exponent near each singular point;
  /// must exceed -1.
  double inner_exponent = 0.0;
  /// Far-field model f ~ C |u|^outer_exponent (integrable tails have
  /// outer_exponent < -1; divergence detection does not rely on it).
  double outer_exponent = -2.0;
  /// Natural log-width of the integrand's multiplicative periodicity;
  /// used to size ladder rungs.
  double log_period = 1.0;
  /// Appends the known kink/jump positions of f inside [lo, hi]. Kernel
  /// increments have features of width ~|t| at every dyadic scale; panels
  /// wider than that cannot detect them from node values alone, so the
  /// engine pre-splits each piece at these points.
  std::function<void(double lo, double hi, std::vector<double>& out)>
      breakpoints;
};

/// Integral of f over R. Reports divergence when the partial sums over
/// outward shells grow by >= 1.5x across the last three shells, and an
/// inconclusive result when the budget runs out first.
NormReport line_integral(const LineIntegrand& g, const QuadratureConfig& cfg,
                         bool record_pieces = false);

}  // namespace fracstable
