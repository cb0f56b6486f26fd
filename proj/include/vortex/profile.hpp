#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortex/grid.hpp"
#include "vortex/model.hpp"

namespace vortex {

/// Radial amplitudes (f+, f-) of the equivariant vortex (f+ e^{i theta}, f- e^{i theta}).
struct Profile {
  RadialGrid grid;
  std::vector<double> f_plus;
  std::vector<double> f_minus;
  GLParams params;
  double lambda = 1.0;
  double boundary_plus = 1.0;   // imposed value at r = R
  double boundary_minus = 1.0;
  bool radius_is_rescaled = false;  // lambda = 1 frame on a disk of radius sqrt(lambda)
};

enum class InitialGuess { standard, ramp, tanh };

struct ProfileOptions {
  double lambda = 1.0;
  double tol = 1e-9;           // scaled sup residual
  int max_newton = 60;
  InitialGuess guess = InitialGuess::standard;
  bool allow_continuation = true;
  std::optional<std::pair<double, double>> boundary;  // defaults to (t+, t-)
  bool record_trace = false;
};

struct NewtonRecord {
  int iteration = 0;
  double residual = 0.0;  // scaled sup residual before the step
  double step = 0.0;      // accepted damping factor
  double energy = 0.0;
};

struct ProfileSolve {
  Profile profile;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  int newton_iterations = 0;  // summed over all continuation stages
  int continuation_stages = 0;
  std::vector<NewtonRecord> trace;  // last stage only
};

/// Solves the radial system
///   -f'' - f'/r + f/r^2 + lambda [A(f^2 - t^2) + B(g^2 - s^2)] f = 0
/// for both components on [0, R] with f(R) = boundary values, by damped Newton.
/// Falls back to continuation in B from 0, then in lambda, when the direct
/// solve fails or leaves the nonnegative cone. Throws SolverError when all fail.
ProfileSolve solve_profile_report(const GLParams& p, double radius, std::size_t n_cells,
                                  const ProfileOptions& opts = {});
Profile solve_profile(const GLParams& p, double radius, std::size_t n_cells, const ProfileOptions& opts = {});

struct ProfileResidual {
  double sup_plus = 0.0;   // scaled by the size of the individual terms
  double sup_minus = 0.0;
  double abs_plus = 0.0;   // plain sup of the pointwise residual
  double abs_minus = 0.0;
  std::vector<double> pointwise_plus;
  std::vector<double> pointwise_minus;
};

ProfileResidual profile_residual(const Profile& prof);

/// V+ = lambda [A+(f+^2 - t+^2) + B(f-^2 - t-^2)] and the analogue for the minus component.
std::pair<std::vector<double>, std::vector<double>> potentials(const Profile& prof, double lambda);

struct EnergyParts {
  double gradient = 0.0;     // pi int (f')^2 r dr, including the rim half cell
  double centrifugal = 0.0;  // pi int f^2 / r^2 r dr
  double potential = 0.0;    // (lambda pi / 2) int P r dr
  double total = 0.0;
};

EnergyParts energy_parts(const Profile& prof, double lambda);
double energy(const Profile& prof, double lambda);

struct AsymptoticCoeffs {
  double a_plus = 0.0;
  double a_minus = 0.0;
};

/// Coefficients of f = t + a / r^2 + O(r^-4) for the entire solution (lambda = 1).
AsymptoticCoeffs closed_form_asymptotics(const GLParams& p);

struct TailFit {
  AsymptoticCoeffs coeffs;
  double residual_plus = 0.0;   // rms deviation of r^2 (f - t) from the fitted constant
  double residual_minus = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares constant fit of r^2 (f - t) over nodes with r in [r_lo, r_hi].
TailFit tail_fit(const Profile& prof, double r_lo, double r_hi);
TailFit tail_fit(const Profile& prof);  // window [0.6 R, 0.9 R]

struct MonotonicityReport {
  bool plus_monotone = true;
  bool minus_monotone = true;
  double worst_plus = 0.0;   // most negative forward difference
  double worst_minus = 0.0;
};

MonotonicityReport monotonicity_check(const Profile& prof, double tol);

/// Large-disk approximation of the entire solution: lambda = 1 on [0, R], with
/// f(R) = t + a / R^2 when corrected_bc is set.
Profile entire_solution_approx(const GLParams& p, double radius, std::size_t n_cells, bool corrected_bc);

/// Derivative f' at the nodes by central differences; the origin uses the odd
/// reflection f(-r) = -f(r), the rim the ghost value 2 f(R) - f_N.
std::vector<double> profile_derivative(const RadialGrid& grid, const std::vector<double>& f, double boundary);

/// One-sided second-order estimate of f'(R).
double rim_derivative(const RadialGrid& grid, const std::vector<double>& f, double boundary);

}  // namespace vortex
