#pragma once

#include <string>

namespace vortex {

/// Coupling constants of the two-component energy
///   A+ (|psi+|^2 - t+^2)^2 + A- (|psi-|^2 - t-^2)^2 + 2B (|psi+|^2 - t+^2)(|psi-|^2 - t-^2).
struct GLParams {
  double a_plus = 1.0;
  double a_minus = 1.0;
  double b = 0.0;
  double t_plus = 1.0;
  double t_minus = 1.0;

  bool operator==(const GLParams&) const = default;
};

/// Two-component condensate constants (masses, couplings, chemical potentials).
struct BECParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double g1 = 1.0;
  double g2 = 1.0;
  double g12 = 0.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double hbar = 1.0;
};

/// Result of a parameter check. Violations are data so that sweeps can skip them.
struct ParamCheck {
  bool ok = true;
  std::string violation;  // first violated condition, empty when ok

  explicit operator bool() const noexcept { return ok; }
};

ParamCheck validate_params(const GLParams& p);

/// Throws InvalidArgument naming the violated condition.
void require_valid(const GLParams& p);

/// Balanced case: A+- = 1, t+-^2 = 1/2, with the given cross coupling.
GLParams balanced_params(double b);

/// Smallest eigenvalue of [[A+, B], [B, A-]].
double coupling_matrix_lambda_s(const GLParams& p);

struct BoundReport {
  double lambda_s = 0.0;
  double big_m = 0.0;       // max{A+ t+^2 + B t-^2, A- t-^2 + B t+^2}
  double cap_lambda = 0.0;  // sup bound on |Psi|
};

/// A priori sup bound on |Psi| for solutions with |Psi|^2 <= t+^2 + t-^2 on the boundary.
BoundReport sup_bound(const GLParams& p);

/// lambda below which the equivariant solution is the only critical point:
/// j_{0,1}^2 / (A+ t+^2 + A- t-^2 + |B| (t+^2 + t-^2)).
double small_lambda_uniqueness_bound(const GLParams& p);

struct BECMapping {
  double lambda = 0.0;
  GLParams params;
};

/// Rescales the stationary condensate equations to the GL form.
/// Throws InvalidArgument when g1 g2 - g12^2 <= 0 or a derived t^2 is not positive.
BECMapping bec_to_gl(const BECParams& b);

}  // namespace vortex
