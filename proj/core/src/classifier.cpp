#include "fracstable/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace fracstable {

KernelSection section_of(const KernelSpec& spec, std::size_t atom_index) {
  const AtomSpec& atom = spec.atoms.at(atom_index);
  KernelSection s;
  s.kappa = spec.params.kappa();
  s.q = atom.q;
  s.s = atom.s;
  s.b1 = atom.b1;
  s.F3 = atom.F3;
  s.log_active = log_term_active(atom, spec.params);
  s.label = spec.label;
  s.value = [spec, atom_index](double u) {
    return kernel_value(spec, atom_index, 0.0, u);
  };
  return s;
}

namespace {

struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Grid make_grid(const ClassifierConfig& cfg) {
  Grid g;
  int m = cfg.nodes_per_side;
  double lo = std::log(cfg.u_min), hi = std::log(cfg.u_max);
  double dx = (hi - lo) / (m - 1);
  g.nodes.resize(2 * m);
  g.weights.resize(2 * m);
  for (int i = 0; i < m; ++i) {
    double u = std::exp(lo + i * dx);
    double w = u * dx;  // du = u dx
    g.nodes[m + i] = u;
    g.weights[m + i] = w;
    g.nodes[m - 1 - i] = -u;
    g.weights[m - 1 - i] = w;
  }
  return g;
}

double qnorm_alpha(const std::vector<double>& vals, const Grid& g,
                   double alpha) {
  CompensatedSum s;
  for (std::size_t i = 0; i < vals.size(); ++i)
    s.add(g.weights[i] * std::pow(std::fabs(vals[i]), alpha));
  return s.value();
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// Compact Nelder-Mead. Deterministic; no restarts inside.
double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, int max_iters) {
  std::size_t n = x.size();
  std::vector<std::vector<double>> simplex(n + 1, x);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double step = x[i] != 0.0 ? 0.08 * std::fabs(x[i]) : 0.05;
    simplex[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  for (int it = 0; it < max_iters; ++it) {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> snew(n + 1);
    std::vector<double> fnew(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      snew[i] = simplex[idx[i]];
      fnew[i] = fv[idx[i]];
    }
    simplex.swap(snew);
    fv.swap(fnew);
    if (std::fabs(fv[n] - fv[0]) <= 1e-14 * (1.0 + std::fabs(fv[0]))) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = centroid[k] + coef * (simplex[n][k] - centroid[k]);
      return p;
    };
    std::vector<double> xr = blend(-1.0);
    double fr = f(xr);
    if (fr < fv[0]) {
      std::vector<double> xe = blend(-2.0);
      double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      std::vector<double> xc = blend(0.5);
      double fc = f(xc);
      if (fc < fv[n]) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  x = simplex[best];
  return fv[best];
}

struct Candidate {
  double residual_alpha;  // alpha-power of the unnormalized distance
  double b, a, d;
  bool operator<(const Candidate& o) const {
    if (residual_alpha != o.residual_alpha)
      return residual_alpha < o.residual_alpha;
    if (b != o.b) return b < o.b;
    if (a != o.a) return a < o.a;
    return d < o.d;
  }
};

std::size_t worker_count(const ClassifierConfig& cfg) {
  if (cfg.threads > 0) return static_cast<std::size_t>(cfg.threads);
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace

AffineFitResult fixed_point_residual(const KernelSection& section, double alpha,
                                     double c, const ClassifierConfig& cfg) {
  if (!(c > 0.0) || c == 1.0)
    throw std::domain_error("fixed_point_residual: need c > 0, c != 1");
  Grid grid = make_grid(cfg);
  std::size_t n = grid.nodes.size();

  std::vector<double> A(n);
  for (std::size_t i = 0; i < n; ++i) A[i] = section.value(c * grid.nodes[i]);
  double normA = qnorm_alpha(A, grid, alpha);

  AffineFitResult out;
  out.c = c;
  if (normA == 0.0) {
    out.degenerate = true;
    out.converged = true;
    return out;
  }

  auto dist_alpha = [&](double b, double a, double d) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      double r = A[i] - b * section.value(grid.nodes[i] + a) - d;
      s.add(grid.weights[i] * std::pow(std::fabs(r), alpha));
    }
    return s.value();
  };

  // Exact candidates from the period-return relation and its sign mirror.
  double ck = std::pow(c, section.kappa);
  std::vector<Candidate> seeds;
  auto push_seed = [&](double b, double a, double d) {
    seeds.push_back({dist_alpha(b, a, d), b, a, d});
  };
  push_seed(ck * section.b1, 0.0, 0.0);
  push_seed(-ck * section.b1, 0.0, 0.0);
  if (section.log_active) push_seed(ck * section.b1, 0.0, section.F3 * std::log(c));

  // Coarse scan; b sweeps are vectorized over precomputed section values.
  std::vector<double> b_grid = logspace(1e-2, 1e2, cfg.b_count);
  {
    std::vector<double> negs(b_grid.rbegin(), b_grid.rend());
    for (double& x : negs) x = -x;
    b_grid.insert(b_grid.begin(), negs.begin(), negs.end());
  }
  std::vector<double> a_grid = linspace(-5.0, 5.0, cfg.a_count);

  std::size_t nworkers = std::min(worker_count(cfg), a_grid.size());
  std::vector<Candidate> best_per_a(a_grid.size());
  auto scan_a = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> B(n);
    for (std::size_t ia = lo; ia < hi; ++ia) {
      double a = a_grid[ia];
      for (std::size_t i = 0; i < n; ++i)
        B[i] = section.value(grid.nodes[i] + a);
      Candidate best{std::numeric_limits<double>::infinity(), 0, 0, 0};
      for (double b : b_grid) {
        for (double d : cfg.d_grid) {
          CompensatedSum s;
          for (std::size_t i = 0; i < n; ++i) {
            double r = A[i] - b * B[i] - d;
            s.add(grid.weights[i] * std::pow(std::fabs(r), alpha));
          }
          Candidate cand{s.value(), b, a, d};
          if (cand < best) best = cand;
        }
      }
      best_per_a[ia] = best;
    }
  };
  if (nworkers <= 1) {
    scan_a(0, a_grid.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (a_grid.size() + nworkers - 1) / nworkers;
    for (std::size_t w = 0; w < nworkers; ++w) {
      std::size_t lo = w * chunk, hi = std::min(a_grid.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(scan_a, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& cand : best_per_a) seeds.push_back(cand);
  std::sort(seeds.begin(), seeds.end());

  // Local refinement from the best starts.
  Candidate best = seeds.front();
  int starts = std::min<int>(cfg.refine_starts, static_cast<int>(seeds.size()));
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x{seeds[s].b, seeds[s].a, seeds[s].d};
    double val = nelder_mead(
        [&](const std::vector<double>& p) {
          return dist_alpha(p[0], p[1], p[2]);
        },
        x, cfg.refine_iters);
    Candidate cand{val, x[0], x[1], x[2]};
    if (cand < best) best = cand;
  }

  out.b = best.b;
  out.a = best.a;
  out.d = best.d;
  out.residual = std::pow(best.residual_alpha / normA, 1.0 / alpha);
  out.converged = true;
  return out;
}

ClassificationReport classify_cfsm(const KernelSpec& spec,
                                   const ClassifierConfig& cfg) {
  ClassificationReport rep;
  double alpha = spec.params.alpha;
  rep.alpha_in_open_1_2 = alpha > 1.0 && alpha < 2.0;

  for (std::size_t ai = 0; ai < spec.atoms.size(); ++ai) {
    const AtomSpec& atom = spec.atoms[ai];
    KernelSection sec = section_of(spec, ai);
    AtomClassification ac;

    // Exact candidate at the period return c* = e^{q/|s|}.
    double cstar = std::exp(atom.q / std::fabs(atom.s));
    {
      Grid grid = make_grid(cfg);
      std::vector<double> A(grid.nodes.size());
      double ck = std::pow(cstar, sec.kappa);
      double d = sec.log_active ? sec.F3 * atom.q : 0.0;
      CompensatedSum num;
      double den = 0.0;
      for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        double lhs = sec.value(cstar * grid.nodes[i]);
        double rhs = ck * sec.b1 * sec.value(grid.nodes[i]) + d;
        num.add(grid.weights[i] * std::pow(std::fabs(lhs - rhs), alpha));
        den += grid.weights[i] * std::pow(std::fabs(lhs), alpha);
      }
      ac.period_return_residual =
          den > 0.0 ? std::pow(num.value() / den, 1.0 / alpha) : 0.0;
    }

    // Fixed-point scan over c -> 1, period returns excluded.
    std::vector<double> cs;
    for (int k = cfg.c_steps; k >= 1; --k) cs.push_back(1.0 - cfg.c_step * k);
    for (int k = 1; k <= cfg.c_steps; ++k) cs.push_back(1.0 + cfg.c_step * k);
    double min_r = std::numeric_limits<double>::infinity();
    double max_r = 0.0;
    bool degenerate = false;
    for (double c : cs) {
      if (!(c > 0.0)) continue;
      double lc = std::fabs(std::log(c));
      double period = atom.q / std::fabs(atom.s);
      if (std::fabs(std::remainder(lc, period)) < 1e-9 && lc > 0.5 * period)
        continue;  // period return, exact relation holds there by design
      AffineFitResult fit = fixed_point_residual(sec, alpha, c, cfg);
      degenerate = degenerate || fit.degenerate;
      ac.fits.push_back(fit);
      min_r = std::min(min_r, fit.residual);
      max_r = std::max(max_r, fit.residual);
    }
    ac.min_residual = min_r;

    if (degenerate) {
      ac.verdict = AtomVerdict::inconclusive;
    } else if (min_r >= cfg.separation_floor) {
      ac.verdict = AtomVerdict::cyclic;
    } else if (max_r <= cfg.fit_tol) {
      // Exact affine family at every c: identity-flow component.
      ac.verdict = AtomVerdict::fixed;
    } else {
      // Residuals must fall toward c = 1 to call the atom fixed.
      bool near_zero = true;
      bool decreasing = true;
      double prev_lo = -1.0, prev_hi = -1.0;
      for (const auto& f : ac.fits) {
        double dist = std::fabs(f.c - 1.0);
        if (dist <= cfg.c_step * 2.5 && f.residual > cfg.fit_tol)
          near_zero = false;
        if (f.c < 1.0) {
          if (prev_lo >= 0.0 && f.residual > prev_lo * 1.1) decreasing = false;
          prev_lo = f.residual;
        } else {
          if (prev_hi >= 0.0 && f.residual > prev_hi * 1.1) decreasing = false;
          prev_hi = f.residual;
        }
      }
      // On the c < 1 leg the scan runs toward 1, on the c > 1 leg away
      // from it; require the residual curve to shrink as |c - 1| does.
      ac.verdict = (near_zero && decreasing) ? AtomVerdict::fixed
                                             : AtomVerdict::inconclusive;
    }
    rep.atoms.push_back(std::move(ac));
  }

  bool all_cyclic = true, all_fixed = true, any_inconclusive = false;
  for (const auto& a : rep.atoms) {
    all_cyclic = all_cyclic && a.verdict == AtomVerdict::cyclic;
    all_fixed = all_fixed && a.verdict == AtomVerdict::fixed;
    any_inconclusive = any_inconclusive || a.verdict == AtomVerdict::inconclusive;
  }
  if (any_inconclusive)
    rep.verdict = ProcessClass::inconclusive;
  else if (all_cyclic)
    rep.verdict = ProcessClass::cfsm;
  else if (all_fixed)
    rep.verdict = ProcessClass::mixed_lfsm;
  else
    rep.verdict = ProcessClass::pfsm_with_mixed_component;
  return rep;
}

UniquenessReport uniqueness_search(const KernelSection& a,
                                   const KernelSection& b, double alpha,
                                   const ClassifierConfig& cfg) {
  Grid grid = make_grid(cfg);
  std::size_t n = grid.nodes.size();
  std::vector<double> A(n);
  for (std::size_t i = 0; i < n; ++i) A[i] = a.value(grid.nodes[i]);
  double normA = qnorm_alpha(A, grid, alpha);

  UniquenessReport rep;
  rep.fit_tol = cfg.fit_tol;
  rep.separation_floor = cfg.separation_floor;
  rep.iff_applicable = a.s == 1.0 && b.s == 1.0 && a.q == b.q;
  if (normA == 0.0) {
    rep.verdict = UniquenessVerdict::inconclusive;
    return rep;
  }

  auto dist_alpha = [&](double h, double k, double g, double j) {
    if (!(k > 0.0) || h == 0.0) return std::numeric_limits<double>::infinity();
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      double r = A[i] - h * b.value(k * grid.nodes[i] + g) - j;
      s.add(grid.weights[i] * std::pow(std::fabs(r), alpha));
    }
    return s.value();
  };

  struct Cand {
    double val, h, k, g, j;
    bool operator<(const Cand& o) const {
      if (val != o.val) return val < o.val;
      if (h != o.h) return h < o.h;
      if (k != o.k) return k < o.k;
      if (g != o.g) return g < o.g;
      return j < o.j;
    }
  };

  std::vector<double> h_grid = logspace(1e-2, 1e2, cfg.b_count);
  {
    std::vector<double> negs(h_grid.rbegin(), h_grid.rend());
    for (double& x : negs) x = -x;
    h_grid.insert(h_grid.begin(), negs.begin(), negs.end());
  }
  std::vector<double> k_grid = logspace(1e-1, 1e1, cfg.k_count);
  std::vector<double> g_grid = linspace(-5.0, 5.0, cfg.g_count);

  std::size_t nworkers = std::min(worker_count(cfg), k_grid.size());
  std::vector<Cand> best_per_k(
      k_grid.size(),
      {std::numeric_limits<double>::infinity(), 1.0, 1.0, 0.0, 0.0});
  auto scan_k = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> B(n);
    for (std::size_t ik = lo; ik < hi; ++ik) {
      double k = k_grid[ik];
      Cand best = best_per_k[ik];
      for (double g : g_grid) {
        for (std::size_t i = 0; i < n; ++i)
          B[i] = b.value(k * grid.nodes[i] + g);
        for (double h : h_grid) {
          for (double j : cfg.d_grid) {
            CompensatedSum s;
            for (std::size_t i = 0; i < n; ++i) {
              double r = A[i] - h * B[i] - j;
              s.add(grid.weights[i] * std::pow(std::fabs(r), alpha));
            }
            Cand cand{s.value(), h, k, g, j};
            if (cand < best) best = cand;
          }
        }
      }
      best_per_k[ik] = best;
    }
  };
  if (nworkers <= 1) {
    scan_k(0, k_grid.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (k_grid.size() + nworkers - 1) / nworkers;
    for (std::size_t w = 0; w < nworkers; ++w) {
      std::size_t lo = w * chunk, hi = std::min(k_grid.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(scan_k, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<Cand> seeds(best_per_k.begin(), best_per_k.end());
  std::sort(seeds.begin(), seeds.end());

  Cand best = seeds.front();
  int starts = std::min<int>(cfg.refine_starts, static_cast<int>(seeds.size()));
  for (int s = 0; s < starts; ++s) {
    // Optimize in (h, log k, g, j) so the k > 0 constraint is built in.
    std::vector<double> x{seeds[s].h, std::log(seeds[s].k), seeds[s].g,
                          seeds[s].j};
    double val = nelder_mead(
        [&](const std::vector<double>& p) {
          return dist_alpha(p[0], std::exp(p[1]), p[2], p[3]);
        },
        x, cfg.refine_iters);
    Cand cand{val, x[0], std::exp(x[1]), x[2], x[3]};
    if (cand < best) best = cand;
  }

  rep.h = best.h;
  rep.k = best.k;
  rep.g = best.g;
  rep.j = best.j;
  rep.residual = std::pow(best.val / normA, 1.0 / alpha);

  if (rep.residual >= cfg.separation_floor) {
    rep.verdict = UniquenessVerdict::essentially_different;
  } else if (rep.residual <= cfg.fit_tol && rep.iff_applicable) {
    rep.verdict = UniquenessVerdict::essentially_identical;
    rep.identical_fdd = std::fabs(std::fabs(rep.h) - 1.0) <= 1e-6;
  } else {
    rep.verdict = UniquenessVerdict::inconclusive;
  }
  return rep;
}

UniquenessReport uniqueness_search(const KernelSpec& spec_a,
                                   const KernelSpec& spec_b,
                                   const ClassifierConfig& cfg) {
  if (spec_a.params.alpha != spec_b.params.alpha ||
      spec_a.params.H != spec_b.params.H)
    throw std::invalid_argument(
        "uniqueness_search: both kernels must share (alpha, H)");
  if (spec_a.atoms.size() != 1 || spec_b.atoms.size() != 1)
    throw std::invalid_argument(
        "uniqueness_search on specs requires single-atom kernels; compare "
        "sections directly for the multi-atom necessary condition");
  return uniqueness_search(section_of(spec_a, 0), section_of(spec_b, 0),
                           spec_a.params.alpha, cfg);
}

}  // namespace fracstable
