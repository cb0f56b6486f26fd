#include "vortex/polar.hpp"

#include <cmath>

#include "vortex/error.hpp"
#include "vortex/grid.hpp"

namespace vortex {

std::vector<double> angular_stiffness(int n_theta) {
  if (n_theta < 4 || n_theta % 2 != 0) throw InvalidArgument("n_theta must be even and at least 4");
  const int half = n_theta / 2;
  std::vector<double> s(static_cast<std::size_t>(n_theta) * n_theta);
  for (int j = 0; j < n_theta; ++j) {
    for (int l = 0; l < n_theta; ++l) {
      const double d = 2.0 * M_PI * (j - l) / n_theta;
      double v = static_cast<double>(half) * half * ((j - l) % 2 == 0 ? 1.0 : -1.0);
      for (int k = 1; k < half; ++k) v += 2.0 * k * k * std::cos(k * d);
      s[static_cast<std::size_t>(j) * n_theta + l] = v / n_theta;
    }
  }
  return s;
}

PolarOperator assemble_polar_operator(const Profile& prof, double lambda, int n_theta) {
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  if (prof.f_plus.size() != n || prof.f_minus.size() != n) throw InvalidArgument("profile arrays do not match grid");
  const auto s = angular_stiffness(n_theta);

  PolarOperator op;
  op.grid = g;
  op.n_theta = n_theta;
  const std::size_t per = op.per_node();
  op.stiffness = SymmetricBand(n * per, per);
  op.mass.assign(n * per, 0.0);

  // Radial part: every (angle, component) line is an independent mode-0 radial function.
  for (std::size_t c = 0; c < per; ++c) add_radial_stiffness(op.stiffness, g, per, c, 0);

  const auto [vp, vm] = potentials(prof, lambda);
  const GLParams& p = prof.params;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = g.weight(i), r = g.node(i);
    const double fp = prof.f_plus[i], fm = prof.f_minus[i];
    for (int j = 0; j < n_theta; ++j) {
      for (std::size_t c = 0; c < 4; ++c) {
        const std::size_t a = op.index(i, j, c);
        op.mass[a] = w;
        op.stiffness.add(a, a, w * (c % 2 == 0 ? vp[i] : vm[i]));
      }
      // Angular derivative couples equal components across angles.
      for (int l = 0; l <= j; ++l) {
        const double v = w / (r * r) * s[static_cast<std::size_t>(j) * n_theta + l];
        for (std::size_t c = 0; c < 4; ++c) op.stiffness.add(op.index(i, j, c), op.index(i, l, c), v);
      }
      // <psi, phi> = f (x cos theta + y sin theta) per component.
      const double th = 2.0 * M_PI * j / n_theta;
      const double co = std::cos(th), si = std::sin(th);
      const std::size_t xp = op.index(i, j, 0), xm = op.index(i, j, 1), yp = op.index(i, j, 2), ym = op.index(i, j, 3);
      const double cp = p.a_plus * fp * fp, cm = p.a_minus * fm * fm, cx = p.b * fp * fm;
      const double k = 2.0 * lambda * w;
      op.stiffness.add(xp, xp, k * cp * co * co);
      op.stiffness.add(yp, yp, k * cp * si * si);
      op.stiffness.add(yp, xp, k * cp * co * si);
      op.stiffness.add(xm, xm, k * cm * co * co);
      op.stiffness.add(ym, ym, k * cm * si * si);
      op.stiffness.add(ym, xm, k * cm * co * si);
      op.stiffness.add(xm, xp, k * cx * co * co);
      op.stiffness.add(ym, yp, k * cx * si * si);
      op.stiffness.add(ym, xp, k * cx * si * co);
      op.stiffness.add(yp, xm, k * cx * co * si);
    }
  }
  return op;
}

}  // namespace vortex
