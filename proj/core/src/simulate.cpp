#include "fracstable/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace fracstable {

double sas_variate(RngStream& rng, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("sas_variate: alpha must lie in (0, 2)");
  double U = M_PI * (rng.next_unit_open() - 0.5);
  double W = -std::log(rng.next_unit_open());
  if (alpha == 1.0) return std::tan(U);
  return std::sin(alpha * U) / std::pow(std::cos(U), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * U) / W, (1.0 - alpha) / alpha);
}

std::vector<double> sas_sample(RngStream& rng, std::size_t n, double alpha) {
  std::vector<double> out(n);
  for (auto& x : out) x = sas_variate(rng, alpha);
  return out;
}

namespace {

// u-axis breakpoints: geometric ladders into every singular point, linear
// bridges between clusters, geometric growth out to u_max. Mass of the
// kernel concentrates near the singular points for kappa < 0, hence the
// log grading.
std::vector<double> build_u_breakpoints(const KernelSpec& spec,
                                        const SimulationGrid& grid) {
  std::set<double> sing{0.0};
  for (double t : grid.t_grid) sing.insert(-t);
  std::vector<double> P(sing.begin(), sing.end());

  double min_period = 1e9;
  for (const auto& a : spec.atoms)
    min_period = std::min(min_period, a.q / std::fabs(a.s));

  // Cells per log-period such that the total lands near grid.u_cells.
  double span = P.back() - P.front();
  double r_min = 1e-5;
  double ladders = 2.0 * static_cast<double>(P.size());
  double ladder_nats = std::log(0.5 * std::max(1.0, span) / r_min) + 1.0;
  double outer_nats = 2.0 * std::log(grid.u_max / std::max(1.0, span));
  double per_period =
      std::max(6.0, grid.u_cells * min_period /
                        (ladders * ladder_nats + outer_nats + 1e-9));
  double ratio = std::exp(min_period / per_period);

  std::set<double> bp;
  auto add = [&](double x) {
    if (std::fabs(x) <= grid.u_max) bp.insert(x);
  };
  for (double p : P) add(p);
  add(grid.u_max);
  add(-grid.u_max);

  for (std::size_t i = 0; i < P.size(); ++i) {
    double left_gap = i == 0 ? 1.0 : 0.5 * (P[i] - P[i - 1]);
    double right_gap = i + 1 == P.size() ? 1.0 : 0.5 * (P[i + 1] - P[i]);
    for (int side = -1; side <= 1; side += 2) {
      double r_max = side < 0 ? left_gap : right_gap;
      if (r_max < r_min) continue;
      for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= ratio)
        add(P[i] + side * r);
      add(P[i] + side * r_max);
    }
  }
  // Outer growth from the cluster edges to the truncation radius.
  double edge = std::max(1.0, span);
  for (double r = edge; r <= grid.u_max; r *= ratio) {
    add(P.back() + r);
    add(P.front() - r);
  }
  // Linear fill across the middle so bridges between distant singular
  // points are not left coarse.
  int fill = std::max(8, grid.u_cells / 8);
  for (int i = 0; i <= fill; ++i)
    add(P.front() - 1.0 + (span + 2.0) * i / fill);

  return {bp.begin(), bp.end()};
}

}  // namespace

PathEnsemble simulate_paths(const KernelSpec& spec, const SimulationGrid& grid,
                            std::size_t replications, int threads) {
  if (grid.t_grid.empty())
    throw std::invalid_argument("simulate_paths: empty t grid");
  if (grid.u_cells <= 0 || grid.v_cells <= 0)
    throw std::invalid_argument("simulate_paths: cell counts must be positive");
  double tmax = 0.0;
  for (double t : grid.t_grid) tmax = std::max(tmax, std::fabs(t));
  if (!(grid.u_max > tmax + 1.0))
    throw std::invalid_argument(
        "simulate_paths: u_max must exceed max |t| plus a safety margin");

  double alpha = spec.params.alpha;
  std::size_t nt = grid.t_grid.size();
  std::vector<double> bp = build_u_breakpoints(spec, grid);

  // Precompute increment coefficients per (atom, v, u) cell:
  //   G_t(z, v_c, u_c) * (weight dv du)^{1/alpha}.
  PathEnsemble ens;
  ens.reps = replications;
  ens.t_grid = grid.t_grid;
  ens.label = spec.label;
  ens.seed = grid.seed;

  std::vector<double> coeff;  // cells x nt
  coeff.reserve(spec.atoms.size() * grid.v_cells * (bp.size() - 1) * nt);
  for (std::size_t ai = 0; ai < spec.atoms.size(); ++ai) {
    const AtomSpec& atom = spec.atoms[ai];
    double dv = atom.q / grid.v_cells;
    for (int iv = 0; iv < grid.v_cells; ++iv) {
      double vc = (iv + 0.5) * dv;
      for (std::size_t iu = 0; iu + 1 < bp.size(); ++iu) {
        double du = bp[iu + 1] - bp[iu];
        if (du <= 0.0) continue;
        double uc = 0.5 * (bp[iu] + bp[iu + 1]);
        double m = std::pow(atom.weight * dv * du, 1.0 / alpha);
        for (std::size_t j = 0; j < nt; ++j) {
          double g;
          try {
            g = increment_value(spec, ai, vc, grid.t_grid[j], uc);
          } catch (const singular_point_error&) {
            ens.perturbed_cells++;
            g = increment_value(spec, ai, vc, grid.t_grid[j],
                                uc + 0.25 * du);
          }
          coeff.push_back(g * m);
        }
      }
    }
  }
  std::size_t cells = coeff.size() / nt;

  ens.values.assign(replications * nt, 0.0);
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nthreads = threads > 0 ? static_cast<std::size_t>(threads)
                                     : std::max(1u, hw);
  nthreads = std::min<std::size_t>(nthreads, std::max<std::size_t>(1, replications));

  auto worker = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> acc(nt);
    for (std::size_t r = lo; r < hi; ++r) {
      RngStream rng(grid.seed, r);
      std::fill(acc.begin(), acc.end(), 0.0);
      const double* c = coeff.data();
      for (std::size_t k = 0; k < cells; ++k, c += nt) {
        double eps = sas_variate(rng, alpha);
        for (std::size_t j = 0; j < nt; ++j) acc[j] += c[j] * eps;
      }
      for (std::size_t j = 0; j < nt; ++j) ens.values[r * nt + j] = acc[j];
    }
  };

  if (nthreads <= 1) {
    worker(0, replications);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (replications + nthreads - 1) / nthreads;
    for (std::size_t i = 0; i < nthreads; ++i) {
      std::size_t lo = i * chunk;
      std::size_t hi = std::min(replications, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return ens;
}

double neg_log_abs_ecf(std::span<const double> values, double theta) {
  CompensatedSum cs, sn;
  for (double x : values) {
    cs.add(std::cos(theta * x));
    sn.add(std::sin(theta * x));
  }
  double n = static_cast<double>(values.size());
  double re = cs.value() / n;
  double im = sn.value() / n;
  return -0.5 * std::log(re * re + im * im);
}

double neg_log_abs_ecf_std_error(std::span<const double> values, double theta) {
  double n = static_cast<double>(values.size());
  double mc = 0.0, ms = 0.0, mcc = 0.0, mss = 0.0, mcs = 0.0;
  for (double x : values) {
    double c = std::cos(theta * x), s = std::sin(theta * x);
    mc += c;
    ms += s;
    mcc += c * c;
    mss += s * s;
    mcs += c * s;
  }
  mc /= n;
  ms /= n;
  double vcc = mcc / n - mc * mc;
  double vss = mss / n - ms * ms;
  double vcs = mcs / n - mc * ms;
  double r2 = mc * mc + ms * ms;
  // gradient of -0.5 log(A^2 + B^2) at (A, B) = (mc, ms)
  double ga = -mc / r2, gb = -ms / r2;
  double var = (ga * ga * vcc + 2.0 * ga * gb * vcs + gb * gb * vss) / n;
  return std::sqrt(std::max(var, 0.0));
}

double neg_log_abs_ecf2(std::span<const double> x, std::span<const double> y,
                        double theta1, double theta2) {
  CompensatedSum cs, sn;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double arg = theta1 * x[i] + theta2 * y[i];
    cs.add(std::cos(arg));
    sn.add(std::sin(arg));
  }
  double n = static_cast<double>(x.size());
  double re = cs.value() / n;
  double im = sn.value() / n;
  return -0.5 * std::log(re * re + im * im);
}

double neg_log_abs_ecf2_std_error(std::span<const double> x,
                                  std::span<const double> y, double theta1,
                                  double theta2) {
  std::vector<double> combo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    combo[i] = theta1 * x[i] + theta2 * y[i];
  return neg_log_abs_ecf_std_error(combo, 1.0);
}

ScaleEstimate empirical_scale(const PathEnsemble& ensemble, std::size_t t_index,
                              std::span<const double> theta_grid, double alpha,
                              int bootstrap, std::uint64_t seed) {
  if (ensemble.reps == 0)
    throw std::invalid_argument("empirical_scale: empty ensemble");
  for (double th : theta_grid)
    if (th == 0.0)
      throw std::invalid_argument("empirical_scale: theta grid must avoid 0");

  std::size_t nt = ensemble.t_grid.size();
  std::vector<double> col(ensemble.reps);
  for (std::size_t r = 0; r < ensemble.reps; ++r)
    col[r] = ensemble.values[r * nt + t_index];

  auto fit = [&](std::span<const double> sample) {
    double num = 0.0, den = 0.0;
    for (double th : theta_grid) {
      double y = neg_log_abs_ecf(sample, th);
      double p = std::pow(std::fabs(th), alpha);
      num += y * p;
      den += p * p;
    }
    double sig_a = num / den;
    return sig_a > 0.0 ? std::pow(sig_a, 1.0 / alpha) : 0.0;
  };

  ScaleEstimate est;
  est.sigma = fit(col);
  if (est.sigma == 0.0)
    throw std::invalid_argument("empirical_scale: degenerate ensemble");

  if (bootstrap > 1) {
    std::vector<double> sig(bootstrap);
    std::vector<double> resampled(ensemble.reps);
    for (int b = 0; b < bootstrap; ++b) {
      RngStream rng(seed, static_cast<std::uint64_t>(b) + 1);
      for (std::size_t i = 0; i < ensemble.reps; ++i)
        resampled[i] = col[rng.next_u64() % ensemble.reps];
      sig[b] = fit(resampled);
    }
    double mean = 0.0;
    for (double s : sig) mean += s;
    mean /= bootstrap;
    double var = 0.0;
    for (double s : sig) var += (s - mean) * (s - mean);
    est.std_error = std::sqrt(var / (bootstrap - 1));
  }
  return est;
}

}  // namespace fracstable
