#include "fracstable/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracstable {

namespace {

// QUADPACK dqk15 nodes and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fv1[7], fv2[7];
  double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    fv1[j] = f(c - x);
    fv2[j] = f(c + x);
    result_k += kWgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) result_g += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  // QUADPACK dqk15 error estimate: scale the raw Gauss-Kronrod difference
  // by the oscillation measure resasc.
  double reskh = 0.5 * result_k;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] *
              (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  resasc *= std::fabs(h);
  double err = std::fabs((result_k - result_g) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {result_k * h, err};
}

// Acceptance requires two subdivision levels to agree, not just the
// panel's internal Gauss-Kronrod difference: a kink can silence the
// internal estimate of a single panel, but not of the panel and both its
// halves at once.
void gk_adaptive_impl(const std::function<double(double)>& f, double a,
                      double b, const PanelEstimate& parent, double abs_tol,
                      double rel_tol, int& budget, int depth,
                      CompensatedSum& value, double& error, bool& ok) {
  double mid = 0.5 * (a + b);
  PanelEstimate left = gk15(f, a, mid);
  PanelEstimate right = gk15(f, mid, b);
  budget -= 2;
  double sum = left.value + right.value;
  double disagree = std::fabs(parent.value - sum);
  double err = std::max(left.error + right.error, 0.5 * disagree);
  double tol = std::max(abs_tol, rel_tol * std::fabs(sum));
  if (err <= tol || depth >= 48 || budget <= 0 ||
      b - a <= 1e-15 * (std::fabs(a) + std::fabs(b))) {
    value.add(sum);
    error += err;
    if (err > tol) ok = false;
    return;
  }
  gk_adaptive_impl(f, a, mid, left, 0.5 * abs_tol, rel_tol, budget, depth + 1,
                   value, error, ok);
  gk_adaptive_impl(f, mid, b, right, 0.5 * abs_tol, rel_tol, budget, depth + 1,
                   value, error, ok);
}

}  // namespace

GKResult gk_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int& budget) {
  if (!(b > a)) return {0.0, 0.0, true};
  PanelEstimate whole = gk15(f, a, b);
  --budget;
  CompensatedSum value;
  double error = 0.0;
  bool ok = true;
  gk_adaptive_impl(f, a, b, whole, abs_tol, rel_tol, budget, 0, value, error,
                   ok);
  double v = value.value();
  bool conv = ok && error <= std::max(abs_tol * 4.0, rel_tol * std::fabs(v) * 4.0);
  return {v, error, conv};
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nw[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  std::sort(nw.begin(), nw.end());
  auto [pos, inserted] = cache.emplace(n, std::move(nw));
  return pos->second;
}

double gauss_fixed(const std::function<double(double)>& f, double a, double b,
                   int n) {
  const auto& nw = gauss_legendre(n);
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  CompensatedSum s;
  for (const auto& [x, w] : nw) s.add(w * f(c + h * x));
  return h * s.value();
}

namespace {

struct LadderResult {
  double value = 0.0;
  double error = 0.0;
  bool ok = true;
  bool divergent = false;
};

// Adaptive integral of one cell, pre-split at the integrand's known kink
// positions.
GKResult integrate_cell(const std::function<double(double)>& f, double a,
                        double b, const LineIntegrand& g, double abs_tol,
                        double rel_tol, int& budget, double shift = 0.0) {
  std::vector<double> cuts;
  if (g.breakpoints) {
    g.breakpoints(a + shift, b + shift, cuts);
    for (double& c : cuts) c -= shift;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() > 257) cuts.clear();  // dense features resolve normally
  }
  GKResult total;
  total.converged = true;
  double lo = a;
  double margin = 1e-12 * (std::fabs(a) + std::fabs(b) + 1.0);
  for (double c : cuts) {
    if (c <= lo + margin || c >= b - margin) continue;
    GKResult r = gk_adaptive(f, lo, c, abs_tol, rel_tol, budget);
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
    lo = c;
  }
  GKResult r = gk_adaptive(f, lo, b, abs_tol, rel_tol, budget);
  total.value += r.value;
  total.error += r.error;
  total.converged = total.converged && r.converged;
  return total;
}

// Integrates f over (p, p + dir*R] climbing geometrically toward p.
// Rung radii shrink by the factor `shrink`; the unresolved core below
// singularity_padding (or below the contribution floor) is extrapolated
// with the measured decay ratio.
LadderResult ladder_inward(const std::function<double(double)>& f, double p,
                           double R, int dir, const LineIntegrand& g,
                           const QuadratureConfig& cfg, int& budget,
                           std::vector<PieceInfo>* pieces, double shift = 0.0) {
  LadderResult out;
  const double shrink = 0.5;
  double hi = R;
  double prev = -1.0, prev2 = -1.0;
  for (int k = 0; k < 80; ++k) {
    double lo = hi * shrink;
    if (lo <= cfg.singularity_padding) break;
    double a = dir > 0 ? p + lo : p - hi;
    double b = dir > 0 ? p + hi : p - lo;
    double floor_abs =
        std::max(cfg.abs_tol, 2e-3 * cfg.rel_tol * std::fabs(out.value));
    GKResult r = integrate_cell(f, a, b, g, floor_abs, cfg.rel_tol, budget, shift);
    out.value += r.value;
    out.error += r.error;
    if (!r.converged) out.ok = false;
    if (pieces) pieces->push_back({a + shift, b + shift, r.value, r.error});
    prev2 = prev;
    prev = r.value;
    hi = lo;
    if (budget <= 0) {
      out.ok = false;
      break;
    }
    // Decay established and the rung is negligible relative to the ladder:
    // extrapolate the rest and stop.
    if (k >= 3 && prev2 > 0.0 && prev < prev2 && prev <= floor_abs) break;
    if (prev == 0.0 && prev2 == 0.0 && k >= 2) break;
  }
  // Remainder below the last rung, from the measured ratio with the
  // algebraic model as fallback.
  double model_ratio = std::pow(shrink, 1.0 + g.inner_exponent);
  double ratio = model_ratio;
  if (prev > 0.0 && prev2 > 0.0) ratio = std::clamp(prev / prev2, 0.0, 0.985);
  ratio = std::clamp(std::max(ratio, model_ratio), 0.0, 0.985);
  if (prev > 0.0) {
    double rem = prev * ratio / (1.0 - ratio);
    out.value += rem;
    out.error += rem;
  }
  return out;
}

// Integrates f over |u| in [R0, infinity) on one side, watching the
// partial sums for divergence.
LadderResult ladder_outward(const std::function<double(double)>& f, double R0,
                            int dir, const LineIntegrand& g,
                            const QuadratureConfig& cfg, int& budget,
                            std::vector<PieceInfo>* pieces, double shift = 0.0) {
  LadderResult out;
  const double grow = 2.0;
  double lo = R0;
  std::vector<double> partial;
  double prev = -1.0, prev2 = -1.0;
  bool decayed = false;
  for (int k = 0; k < 200; ++k) {
    double hi = lo * grow;
    double a = dir > 0 ? lo : -hi;
    double b = dir > 0 ? hi : -lo;
    double floor_abs =
        std::max(cfg.abs_tol, 2e-3 * cfg.rel_tol * std::fabs(out.value));
    GKResult r = integrate_cell(f, a, b, g, floor_abs, cfg.rel_tol, budget, shift);
    out.value += r.value;
    out.error += r.error;
    if (!r.converged) out.ok = false;
    if (pieces) pieces->push_back({a + shift, b + shift, r.value, r.error});
    partial.push_back(out.value);
    prev2 = prev;
    prev = r.value;
    lo = hi;
    if (budget <= 0) {
      out.ok = false;
      break;
    }
    if (k >= 2 && prev2 > 0.0 && prev < prev2) decayed = true;
    if (prev <= floor_abs && (decayed || prev == 0.0) && k >= 2) break;
    if (lo > cfg.u_tail_cutoff) break;
  }
  // Divergence verdict at the stopping point: the partial sums over the
  // last three shells still grow by >= 1.5x. Slow growth below that
  // factor is left to the error estimate, which then reads inconclusive.
  std::size_t m = partial.size();
  if (m >= 4 && partial[m - 4] > 0.0 &&
      partial[m - 1] >= 1.5 * partial[m - 4]) {
    out.divergent = true;
    return out;
  }
  double model_ratio = std::pow(grow, 1.0 + g.outer_exponent);
  double ratio = model_ratio;
  if (prev > 0.0 && prev2 > 0.0) ratio = std::clamp(prev / prev2, 0.0, 0.985);
  ratio = std::clamp(std::max(ratio, std::min(model_ratio, 0.985)), 0.0, 0.985);
  if (prev > 0.0) {
    double rem = prev * ratio / (1.0 - ratio);
    out.value += rem;
    out.error += rem;
  }
  return out;
}

}  // namespace

NormReport line_integral(const LineIntegrand& g, const QuadratureConfig& cfg,
                         bool record_pieces) {
  if (g.inner_exponent <= -1.0)
    throw std::invalid_argument("line_integral: inner exponent must exceed -1");
  NormReport rep;
  std::vector<PieceInfo>* pp = record_pieces ? &rep.pieces : nullptr;
  int budget = cfg.max_subdivisions;

  std::vector<double> P = g.singular_points;
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end(),
                      [](double x, double y) {
                        return std::fabs(x - y) <=
                               1e-12 * (1.0 + std::fabs(x) + std::fabs(y));
                      }),
          P.end());
  if (P.empty()) P.push_back(0.0);

  CompensatedSum total;
  double err = 0.0;
  bool ok = true;
  bool divergent = false;

  auto absorb = [&](const LadderResult& r) {
    total.add(r.value);
    err += r.error;
    ok = ok && r.ok;
    divergent = divergent || r.divergent;
  };

  // Interior bridges between consecutive singular points: two half
  // ladders meeting at the midpoint.
  for (std::size_t i = 0; i + 1 < P.size(); ++i) {
    double mid = 0.5 * (P[i] + P[i + 1]);
    double half = mid - P[i];
    if (half <= cfg.singularity_padding) continue;
    absorb(ladder_inward(g.f, P[i], half, +1, g, cfg, budget, pp));
    absorb(ladder_inward(g.f, P[i + 1], P[i + 1] - mid, -1, g, cfg, budget, pp));
  }

  // Inward ladders on the two outermost flanks, from radius R0.
  double span = std::max(1.0, P.back() - P.front());
  double R0 = std::max(1.0, 2.0 * span);
  absorb(ladder_inward([&](double u) { return g.f(P.back() + u); }, 0.0, R0, +1,
                       g, cfg, budget, pp, P.back()));
  absorb(ladder_inward([&](double u) { return g.f(P.front() + u); }, 0.0, R0,
                       -1, g, cfg, budget, pp, P.front()));

  // Outward tails.
  if (!divergent) {
    LadderResult right = ladder_outward(
        [&](double u) { return g.f(P.back() + u); }, R0, +1, g, cfg, budget, pp,
        P.back());
    absorb(right);
  }
  if (!divergent) {
    LadderResult left = ladder_outward(
        [&](double u) { return g.f(P.front() + u); }, R0, -1, g, cfg, budget,
        pp, P.front());
    absorb(left);
  }

  rep.value = total.value();
  rep.error_estimate = err;
  rep.divergent = divergent;
  if (divergent) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.converged = false;
  } else {
    rep.converged =
        ok && budget > 0 &&
        err <= std::max(cfg.abs_tol * 8.0, cfg.rel_tol * std::fabs(rep.value) * 8.0);
  }
  return rep;
}

}  // namespace fracstable
