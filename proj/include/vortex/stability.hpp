#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortex/model.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

enum class Classification { stable, unstable, marginal };

std::string to_string(Classification c);

struct StabilityOptions {
  std::size_t n_cells = 2048;  // unit-disk cells
  double tol_margin = 1e-7;
  EigenOptions eigen;
};

struct StabilityReport {
  GLParams params;
  double lambda = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
  Classification classification = Classification::marginal;
  std::optional<SpectralVector> ground_vector;  // set when unstable
  double profile_residual = 0.0;
  double eigen_residual = 0.0;
};

Classification classify_value(double mu, double tol_margin);

/// Solves the profile at (p, lambda) on the unit disk and classifies by min(mu0, mu1).
StabilityReport classify(const GLParams& p, double lambda, const StabilityOptions& opts = {});

enum class ThresholdStatus { detected, not_detected, failed };

std::string to_string(ThresholdStatus s);

struct Mu1Sample {
  double lambda = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
};

struct LambdaStarResult {
  double b = 0.0;
  ThresholdStatus status = ThresholdStatus::not_detected;
  double lambda_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  int n_bisections = 0;
  std::vector<Mu1Sample> scan;    // geometric scan points in order
  std::vector<Mu1Sample> trace;   // scan followed by bisection points
  std::vector<std::pair<double, double>> sign_changes;  // every scan bracket where mu1 changes sign
  std::string message;
};

/// Scans lambda = lambda0 4^k from half the small-lambda bound up to lambda_max,
/// recording every sign change of mu1, then bisects the first (+ to -) change in
/// log lambda until hi / lo - 1 <= rel_tol.
LambdaStarResult find_lambda_star(const GLParams& p, double lambda_max, double rel_tol = 1e-3,
                                  const StabilityOptions& opts = {});

/// One independent threshold search per b value; results in input order.
/// Uses up to VORTEX_THREADS workers (default: hardware concurrency).
std::vector<LambdaStarResult> sweep_b(const GLParams& base, const std::vector<double>& b_values, double lambda_max,
                                      double rel_tol = 1e-3, const StabilityOptions& opts = {});

std::size_t worker_count(std::size_t tasks);

struct CrosscheckReport {
  std::vector<BlockSpectrum> blocks;  // n = 0..n_max
  double block_min = 0.0;
  int argmin_block = -1;
  double polar_ground = 0.0;
  double polar_residual = 0.0;
  double relative_difference = 0.0;
  bool min_at_low_block = false;
  bool agree = false;
};

/// Blockwise minimum over n = 0..n_max against the ground state of the full
/// polar-grid operator. Guards: n_cells <= 128, n_theta <= 64.
CrosscheckReport muequal_crosscheck(const GLParams& p, double lambda, int n_max, int n_theta,
                                    std::size_t n_cells = 64, const EigenOptions& opts = {});

}  // namespace vortex
