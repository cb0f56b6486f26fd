#include "vortex/model.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/bessel.hpp"
#include "vortex/error.hpp"

namespace vortex {

ParamCheck validate_params(const GLParams& p) {
  auto fail = [](std::string what) { return ParamCheck{false, std::move(what)}; };
  if (!std::isfinite(p.a_plus) || !std::isfinite(p.a_minus) || !std::isfinite(p.b) ||
      !std::isfinite(p.t_plus) || !std::isfinite(p.t_minus))
    return fail("all parameters finite");
  if (!(p.a_plus > 0.0)) return fail("A+ > 0");
  if (!(p.a_minus > 0.0)) return fail("A- > 0");
  if (!(p.t_plus > 0.0)) return fail("t+ > 0");
  if (!(p.t_minus > 0.0)) return fail("t- > 0");
  if (!(p.b * p.b < p.a_plus * p.a_minus)) return fail("b² < A+A-");
  return {};
}

void require_valid(const GLParams& p) {
  if (auto check = validate_params(p); !check)
    throw InvalidArgument("invalid parameters: violates " + check.violation);
}

GLParams balanced_params(double b) {
  const double t = std::sqrt(0.5);
  return GLParams{1.0, 1.0, b, t, t};
}

double coupling_matrix_lambda_s(const GLParams& p) {
  require_valid(p);
  const double mean = 0.5 * (p.a_plus + p.a_minus);
  const double half_diff = 0.5 * (p.a_plus - p.a_minus);
  const double radius = std::hypot(half_diff, p.b);
  // mean - radius loses digits when the matrix is nearly singular; use the
  // determinant instead.
  const double det = p.a_plus * p.a_minus - p.b * p.b;
  return det / (mean + radius);
}

BoundReport sup_bound(const GLParams& p) {
  BoundReport r;
  r.lambda_s = coupling_matrix_lambda_s(p);
  const double tp2 = p.t_plus * p.t_plus;
  const double tm2 = p.t_minus * p.t_minus;
  r.big_m = std::max(p.a_plus * tp2 + p.b * tm2, p.a_minus * tm2 + p.b * tp2);
  r.cap_lambda = std::sqrt(std::min(2.0 * r.big_m / r.lambda_s, tp2 + tm2));
  return r;
}

double small_lambda_uniqueness_bound(const GLParams& p) {
  require_valid(p);
  const double tp2 = p.t_plus * p.t_plus;
  const double tm2 = p.t_minus * p.t_minus;
  const double c = p.a_plus * tp2 + p.a_minus * tm2 + std::abs(p.b) * (tp2 + tm2);
  return disk_dirichlet_eigenvalue() / c;
}

BECMapping bec_to_gl(const BECParams& b) {
  if (!(b.m1 > 0.0) || !(b.m2 > 0.0)) throw InvalidArgument("masses must be positive");
  if (!(b.hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  const double det = b.g1 * b.g2 - b.g12 * b.g12;
  if (!(det > 0.0)) throw InvalidArgument("positivity condition g1*g2 - g12^2 > 0 fails");

  BECMapping out;
  out.lambda = std::sqrt(b.m1 * b.m2) / (b.hbar * b.hbar);
  const double tp2 = (b.mu1 * b.g2 - b.mu2 * b.g12) / det * std::sqrt(b.m2 / b.m1);
  const double tm2 = (b.mu2 * b.g1 - b.mu1 * b.g12) / det * std::sqrt(b.m1 / b.m2);
  if (!(tp2 > 0.0)) throw InvalidArgument("derived t+^2 is not positive");
  if (!(tm2 > 0.0)) throw InvalidArgument("derived t-^2 is not positive");
  out.params.a_plus = b.m1 / b.m2 * b.g1;
  out.params.a_minus = b.m2 / b.m1 * b.g2;
  out.params.b = b.g12;
  out.params.t_plus = std::sqrt(tp2);
  out.params.t_minus = std::sqrt(tm2);
  return out;
}

}  // namespace vortex
