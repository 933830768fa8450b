// Monte Carlo simulation of the process from its kernel: standard
// symmetric-stable variates via the Chambers-Mallows-Stuck transform,
// grid discretization of the stable random measure, and scale estimation
// from the empirical characteristic function.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracstable/kernel.hpp"
#include "fracstable/rng.hpp"

namespace fracstable {

/// One standard SaS(alpha) variate (scale 1, symmetric), consuming exactly
/// two uniforms from the stream.
double sas_variate(RngStream& rng, double alpha);

std::vector<double> sas_sample(RngStream& rng, std::size_t n, double alpha);

struct SimulationGrid {
  double u_max = 500.0;     // truncation radius of the u axis
  int u_cells = 2000;       // target cell count along u
  int v_cells = 16;         // midpoint cells per atom's [0, q)
  std::vector<double> t_grid;
  std::uint64_t seed = 0;
};

struct PathEnsemble {
  std::size_t reps = 0;
  std::vector<double> t_grid;
  std::vector<double> values;  // reps x t_grid, row-major
  std::string label;
  std::uint64_t seed = 0;
  std::size_t perturbed_cells = 0;  // singular centers nudged by half a cell

  double at(std::size_t rep, std::size_t j) const {
    return values[rep * t_grid.size() + j];
  }
};

/// Simulates `replications` paths. Each replication r consumes its own
/// stream (seed, r); cells are enumerated atom-major, then v, then u, so
/// the output is bitwise independent of the thread count.
PathEnsemble simulate_paths(const KernelSpec& spec, const SimulationGrid& grid,
                            std::size_t replications, int threads = 0);

struct ScaleEstimate {
  double sigma = 0.0;
  double std_error = 0.0;
};

/// Least-squares fit of -log|ecf(theta)| = sigma^alpha |theta|^alpha over
/// the theta grid, with a bootstrap standard error.
ScaleEstimate empirical_scale(const PathEnsemble& ensemble, std::size_t t_index,
                              std::span<const double> theta_grid, double alpha,
                              int bootstrap = 100, std::uint64_t seed = 17);

/// -log| (1/n) sum exp(i theta x_k) |.
double neg_log_abs_ecf(std::span<const double> values, double theta);

/// Delta-method standard error of neg_log_abs_ecf at theta.
double neg_log_abs_ecf_std_error(std::span<const double> values, double theta);

/// Joint version at (theta1, theta2) for pairs (x_k, y_k).
double neg_log_abs_ecf2(std::span<const double> x, std::span<const double> y,
                        double theta1, double theta2);
double neg_log_abs_ecf2_std_error(std::span<const double> x,
                                  std::span<const double> y, double theta1,
                                  double theta2);

}  // namespace fracstable
