// Numerical membership tests for the fixed-point set (mixed-LFSM versus
// cyclic verdicts) and the essential-identity search between two kernels.
// All distances are alpha-quasinorm residuals on a fixed symmetric
// log-graded u-grid, normalized to be scale-free; thresholds are
// calibrated once against the exact affine relations.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracstable/kernel.hpp"

namespace fracstable {

/// The v = 0 section u -> G(z, 0, u) of one atom, with the metadata the
/// search procedures need.
struct KernelSection {
  std::function<double(double)> value;
  double kappa = 0.0;
  double q = 1.0;
  double s = 1.0;
  int b1 = 1;
  double F3 = 0.0;
  bool log_active = false;
  std::string label;
};

KernelSection section_of(const KernelSpec& spec, std::size_t atom_index);

struct ClassifierConfig {
  // Fixed evaluation grid: +-exp-spaced nodes with du cell weights.
  double u_min = 1e-4;
  double u_max = 20.0;
  int nodes_per_side = 256;
  // Coarse search grids.
  int b_count = 41;       // +-logspace(1e-2, 1e2)
  int a_count = 41;       // linspace(-5, 5)
  int k_count = 41;       // logspace(1e-1, 1e1)
  int g_count = 41;       // linspace(-5, 5)
  std::vector<double> d_grid{0.0, 0.25, -0.25, 1.0, -1.0};
  // Verdict thresholds; the band between them reads as inconclusive.
  double fit_tol = 1e-4;
  double separation_floor = 1e-2;
  // Local refinement.
  int refine_starts = 6;
  int refine_iters = 500;
  // c grid for the fixed-point scan: 1 +- c_step*k, k = 1..c_steps.
  int c_steps = 10;
  double c_step = 0.02;
  int threads = 0;  // 0 = hardware concurrency
};

struct AffineFitResult {
  double c = 1.0;
  double b = 1.0;
  double a = 0.0;
  double d = 0.0;
  double residual = 0.0;
  bool converged = false;
  bool degenerate = false;  // zero kernel: any b fits
};

/// Best affine fit G(z,0,cu) ~ b G(z,0,u+a) + d in the grid alpha-norm,
/// relative to |G(z,0,c.)|; coarse grid scan plus local refinement, warm
/// started at the exact period-return relation.
AffineFitResult fixed_point_residual(const KernelSection& section, double alpha,
                                     double c, const ClassifierConfig& cfg);

enum class AtomVerdict { cyclic, fixed, inconclusive };

struct AtomClassification {
  AtomVerdict verdict = AtomVerdict::inconclusive;
  double min_residual = 0.0;
  double period_return_residual = 0.0;  // at c = e^{q/|s|}, exact candidate
  std::vector<AffineFitResult> fits;    // per c of the scan grid
};

enum class ProcessClass {
  cfsm,                    // every atom cyclic
  mixed_lfsm,              // every atom fixed
  pfsm_with_mixed_component,  // both kinds present
  inconclusive
};

struct ClassificationReport {
  ProcessClass verdict = ProcessClass::inconclusive;
  std::vector<AtomClassification> atoms;
  /// Class labels are only asserted by the theory for alpha in (1, 2);
  /// outside that range the verdict is a numerical statement about the
  /// kernel only.
  bool alpha_in_open_1_2 = false;
};

ClassificationReport classify_cfsm(const KernelSpec& spec,
                                   const ClassifierConfig& cfg);

enum class UniquenessVerdict {
  essentially_identical,
  essentially_different,
  inconclusive
};

struct UniquenessReport {
  double h = 1.0;
  double k = 1.0;
  double g = 0.0;
  double j = 0.0;
  double residual = 0.0;
  UniquenessVerdict verdict = UniquenessVerdict::inconclusive;
  /// True when both kernels are single-atom, unit-speed, equal-period, so
  /// a small residual certifies identity (if-and-only-if regime). When
  /// false only a large residual is conclusive (necessary condition only).
  bool iff_applicable = false;
  bool identical_fdd = false;  // essentially identical with |h| = 1
  double fit_tol = 0.0;
  double separation_floor = 0.0;
};

/// Searches for h != 0, k > 0, g, j with A(u) = h B(k u + g) + j in the
/// grid alpha-norm.
UniquenessReport uniqueness_search(const KernelSection& a,
                                   const KernelSection& b, double alpha,
                                   const ClassifierConfig& cfg);

UniquenessReport uniqueness_search(const KernelSpec& spec_a,
                                   const KernelSpec& spec_b,
                                   const ClassifierConfig& cfg);

}  // namespace fracstable
