#include "vortex/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vortex/error.hpp"

namespace vortex {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_profile(const Profile& prof) {
  const std::size_t n = prof.grid.n_cells();
  if (n == 0 || prof.f_plus.size() != n || prof.f_minus.size() != n)
    throw InvalidArgument("profile arrays do not match grid");
}

// 2x2 coupling C = [[A+ f+^2, B f+ f-], [B f+ f-, A- f-^2]] at node i.
std::array<double, 3> coupling(const Profile& prof, std::size_t i) {
  const double fp = prof.f_plus[i], fm = prof.f_minus[i];
  const GLParams& p = prof.params;
  return {p.a_plus * fp * fp, p.b * fp * fm, p.a_minus * fm * fm};
}

// Adds factor * sum_{s,t} C_st (e_s . u)(e_t . u) at node i, where e_plus and
// e_minus are sparse coefficient vectors over the components of the node.
struct Combo {
  std::vector<std::pair<std::size_t, double>> plus;
  std::vector<std::pair<std::size_t, double>> minus;
};

void add_coupling(BlockOperator& op, std::size_t i, const std::array<double, 3>& c, const Combo& e, double factor) {
  const std::size_t nc = op.n_components;
  std::vector<double> local(nc * nc, 0.0);
  auto outer = [&](const auto& x, const auto& y, double v) {
    for (auto [a, ca] : x)
      for (auto [b, cb] : y) local[a * nc + b] += v * ca * cb;
  };
  outer(e.plus, e.plus, c[0]);
  outer(e.plus, e.minus, c[1]);
  outer(e.minus, e.plus, c[1]);
  outer(e.minus, e.minus, c[2]);
  for (std::size_t a = 0; a < nc; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      if (local[a * nc + b] != 0.0) op.stiffness.add(op.index(i, a), op.index(i, b), factor * local[a * nc + b]);
}

// Diagonal potentials: even components carry V+, odd ones V-.
void add_potentials(BlockOperator& op, const Profile& prof, double lambda) {
  const auto [vp, vm] = potentials(prof, lambda);
  for (std::size_t i = 0; i < prof.grid.n_cells(); ++i) {
    const double w = prof.grid.weight(i);
    for (std::size_t c = 0; c < op.n_components; ++c)
      op.stiffness.add(op.index(i, c), op.index(i, c), w * (c % 2 == 0 ? vp[i] : vm[i]));
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SpectralVector split_m1_vector(const BlockOperator& m1, std::span<const double> v) {
  if (m1.n_components != 4 || v.size() != m1.dim()) throw InvalidArgument("not an M1 vector");
  return {m1.component(v, 0), m1.component(v, 1), m1.component(v, 2), m1.component(v, 3)};
}

std::vector<double> pack_m1_vector(const BlockOperator& m1, const SpectralVector& s) {
  if (m1.n_components != 4) throw InvalidArgument("not an M1 operator");
  std::vector<double> v(m1.dim());
  m1.set_component(v, 0, s.a0_plus);
  m1.set_component(v, 1, s.a0_minus);
  m1.set_component(v, 2, s.a2_plus);
  m1.set_component(v, 3, s.a2_minus);
  return v;
}

ScalarPair assemble_Q0(const Profile& prof, double lambda) {
  require_profile(prof);
  const auto [vp, vm] = potentials(prof, lambda);
  ScalarPair out{scalar_radial_operator(prof.grid, 1, vp), scalar_radial_operator(prof.grid, 1, vm)};
  out.plus.form_scale = kTwoPi;
  out.minus.form_scale = kTwoPi;
  return out;
}

BlockOperator assemble_Q0_full(const Profile& prof, double lambda) {
  require_profile(prof);
  const int modes[] = {1, 1, 1, 1};
  BlockOperator op = make_block(prof.grid, modes, kTwoPi);
  add_potentials(op, prof, lambda);
  const Combo re{{{0, 1.0}}, {{1, 1.0}}};
  for (std::size_t i = 0; i < prof.grid.n_cells(); ++i)
    add_coupling(op, i, coupling(prof, i), re, 2.0 * lambda * prof.grid.weight(i));
  return op;
}

BlockOperator assemble_M1(const Profile& prof, double lambda) {
  require_profile(prof);
  const int modes[] = {0, 0, 2, 2};
  BlockOperator op = make_block(prof.grid, modes, kTwoPi);
  add_potentials(op, prof, lambda);
  const Combo diff{{{0, 1.0}, {2, -1.0}}, {{1, 1.0}, {3, -1.0}}};
  for (std::size_t i = 0; i < prof.grid.n_cells(); ++i)
    add_coupling(op, i, coupling(prof, i), diff, lambda * prof.grid.weight(i));
  return op;
}

BlockOperator assemble_pair_block(const Profile& prof, double lambda, int n) {
  require_profile(prof);
  if (n < 1) throw InvalidArgument("pair blocks need n >= 1");
  const int p = std::abs(1 + n), q = std::abs(1 - n);
  const int modes[] = {p, p, p, p, q, q, q, q};
  BlockOperator op = make_block(prof.grid, modes, kTwoPi);
  add_potentials(op, prof, lambda);
  // Z = b_p + conj(b_q): Re Z = x_p + x_q, Im Z = y_p - y_q.
  const Combo re{{{0, 1.0}, {4, 1.0}}, {{1, 1.0}, {5, 1.0}}};
  const Combo im{{{2, 1.0}, {6, -1.0}}, {{3, 1.0}, {7, -1.0}}};
  for (std::size_t i = 0; i < prof.grid.n_cells(); ++i) {
    const auto c = coupling(prof, i);
    add_coupling(op, i, c, re, lambda * prof.grid.weight(i));
    add_coupling(op, i, c, im, lambda * prof.grid.weight(i));
  }
  return op;
}

BlockOperator assemble_Qn(const Profile& prof, double lambda, int n) {
  if (n < 2) throw InvalidArgument("assemble_Qn needs n >= 2");
  return assemble_pair_block(prof, lambda, n);
}

BlockOperator assemble_L1_complex(const Profile& prof, double lambda) {
  return assemble_pair_block(prof, lambda, 1);
}

std::vector<double> l1_lift(const BlockOperator& l1, const SpectralVector& s, std::complex<double> xi) {
  if (l1.n_components != 8) throw InvalidArgument("not an L1 operator");
  const std::size_t n = l1.grid.n_cells();
  std::vector<double> v(l1.dim());
  for (std::size_t i = 0; i < n; ++i) {
    // b2 = -conj(xi) a2, b0 = xi a0
    v[l1.index(i, 0)] = -xi.real() * s.a2_plus[i];
    v[l1.index(i, 1)] = -xi.real() * s.a2_minus[i];
    v[l1.index(i, 2)] = xi.imag() * s.a2_plus[i];
    v[l1.index(i, 3)] = xi.imag() * s.a2_minus[i];
    v[l1.index(i, 4)] = xi.real() * s.a0_plus[i];
    v[l1.index(i, 5)] = xi.real() * s.a0_minus[i];
    v[l1.index(i, 6)] = xi.imag() * s.a0_plus[i];
    v[l1.index(i, 7)] = xi.imag() * s.a0_minus[i];
  }
  return v;
}

MuReport mu_min(const Profile& prof, double lambda, const EigenOptions& opts) {
  const auto q0 = assemble_Q0(prof, lambda);
  const auto m1 = assemble_M1(prof, lambda);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MuReport out;
  const auto ep = ground_eigenpair(q0.plus, nan, opts);
  const auto em = ground_eigenpair(q0.minus, nan, opts);
  out.m1_ground = ground_eigenpair(m1, nan, opts);
  out.mu0_plus = ep.value;
  out.mu0_minus = em.value;
  out.mu0 = std::min(ep.value, em.value);
  out.mu1 = out.m1_ground.value;
  out.mu = std::min(out.mu0, out.mu1);
  out.residual = std::max({ep.residual, em.residual, out.m1_ground.residual});
  return out;
}

std::vector<BlockSpectrum> block_spectra(const Profile& prof, double lambda, int n_max, const EigenOptions& opts) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  std::vector<BlockSpectrum> out;
  auto solve = [&](const BlockOperator& op, std::string id, int n) {
    BlockSpectrum b;
    b.block_id = std::move(id);
    b.n = n;
    const auto g = ground_eigenpair(op, std::numeric_limits<double>::quiet_NaN(), opts);
    const Eigenpair known[] = {g};
    const auto s = next_eigenpair(op.stiffness, op.mass, known, opts);
    b.mu = g.value;
    b.second = s.value;
    b.gap = s.value - g.value;
    b.simple = b.gap > 1e-8;
    b.residual = std::max(g.residual, s.residual);
    out.push_back(std::move(b));
  };
  solve(assemble_Q0_full(prof, lambda), "n0", 0);
  solve(assemble_M1(prof, lambda), "n1", 1);
  for (int n = 2; n <= n_max; ++n) solve(assemble_Qn(prof, lambda, n), "n" + std::to_string(n), n);
  return out;
}

std::size_t multiplicity(const BlockOperator& op, double mu, double delta) {
  return eigenvalues_below(op.stiffness, op.mass, mu + delta) - eigenvalues_below(op.stiffness, op.mass, mu - delta);
}

SimplicityReport simplicity_and_sign(const BlockOperator& m1, const Eigenpair& ground, const EigenOptions& opts) {
  SimplicityReport rep;
  rep.mu = ground.value;
  try {
    const Eigenpair known[] = {ground};
    const auto second = next_eigenpair(m1.stiffness, m1.mass, known, opts);
    rep.second = second.value;
    rep.gap = second.value - ground.value;
    rep.simple = rep.gap > 1e-8;
  } catch (const SolverError& e) {
    rep.note = std::string("second eigenvalue unavailable: ") + e.what();
    return rep;
  }
  if (!rep.simple) rep.note = "ground state is not simple";

  SpectralVector v = split_m1_vector(m1, ground.vector);
  auto sign_of = [](const std::vector<double>& a0) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < a0.size(); ++i)
      if (std::abs(a0[i]) > std::abs(a0[k])) k = i;
    return a0[k] < 0.0 ? -1 : 1;
  };
  rep.sign_plus = sign_of(v.a0_plus);
  rep.sign_minus = sign_of(v.a0_minus);
  auto flip = [](std::vector<double>& a, int s) {
    for (double& x : a) x *= s;
  };
  flip(v.a0_plus, rep.sign_plus);
  flip(v.a2_plus, rep.sign_plus);
  flip(v.a0_minus, rep.sign_minus);
  flip(v.a2_minus, rep.sign_minus);

  auto check = [&](const std::vector<double>& a0, const std::vector<double>& a2) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a0.size(); ++i) {
      worst = std::max(worst, -a2[i]);
      worst = std::max(worst, a2[i] - a0[i]);
    }
    return worst;
  };
  rep.worst_violation = std::max(check(v.a0_plus, v.a2_plus), check(v.a0_minus, v.a2_minus));
  rep.ordered = rep.worst_violation <= 1e-8 && max_abs(ground.vector) > 0.0;
  if (!rep.ordered && rep.note.empty()) rep.note = "ordering 0 <= a2 <= a0 violated";
  rep.vector = std::move(v);
  return rep;
}

FKVector fk_transform(const SpectralVector& v) {
  FKVector out;
  auto half_sum = [](const std::vector<double>& a, const std::vector<double>& b, double sign) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = 0.5 * (a[i] + sign * b[i]);
    return r;
  };
  out.f_plus = half_sum(v.a0_plus, v.a2_plus, 1.0);
  out.f_minus = half_sum(v.a0_minus, v.a2_minus, 1.0);
  out.k_plus = half_sum(v.a0_plus, v.a2_plus, -1.0);
  out.k_minus = half_sum(v.a0_minus, v.a2_minus, -1.0);
  return out;
}

SpectralVector fk_inverse(const FKVector& v) {
  SpectralVector out;
  auto combine = [](const std::vector<double>& f, const std::vector<double>& k, double sign) {
    std::vector<double> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i] + sign * k[i];
    return r;
  };
  out.a0_plus = combine(v.f_plus, v.k_plus, 1.0);
  out.a0_minus = combine(v.f_minus, v.k_minus, 1.0);
  out.a2_plus = combine(v.f_plus, v.k_plus, -1.0);
  out.a2_minus = combine(v.f_minus, v.k_minus, -1.0);
  return out;
}

double q1_fk_form(const Profile& prof, double lambda, const FKVector& v) {
  require_profile(prof);
  const RadialGrid& g = prof.grid;
  const auto [vp, vm] = potentials(prof, lambda);
  double grad = radial_form(g, 0, v.f_plus) + radial_form(g, 0, v.k_plus) + radial_form(g, 0, v.f_minus) +
                radial_form(g, 0, v.k_minus);
  double pot = 0.0, cpl = 0.0;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    const double w = g.weight(i), r = g.node(i);
    const double dp = v.f_plus[i] - v.k_plus[i], dm = v.f_minus[i] - v.k_minus[i];
    grad += 2.0 * w / (r * r) * (dp * dp + dm * dm);
    pot += w * (vp[i] * (v.f_plus[i] * v.f_plus[i] + v.k_plus[i] * v.k_plus[i]) +
                vm[i] * (v.f_minus[i] * v.f_minus[i] + v.k_minus[i] * v.k_minus[i]));
    const auto c = coupling(prof, i);
    cpl += w * (c[0] * v.k_plus[i] * v.k_plus[i] + c[2] * v.k_minus[i] * v.k_minus[i] +
                2.0 * c[1] * v.k_plus[i] * v.k_minus[i]);
  }
  return 4.0 * M_PI * grad + 4.0 * M_PI * pot + 8.0 * lambda * M_PI * cpl;
}

TildeReport tilde_solution_check(const Profile& prof) {
  require_profile(prof);
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  const double h = g.h(), lambda = prof.lambda;
  const auto [vp, vm] = potentials(prof, lambda);
  std::vector<double> fp(n), fm(n);
  for (std::size_t i = 0; i < n; ++i) {
    fp[i] = prof.f_plus[i] / g.node(i);
    fm[i] = prof.f_minus[i] / g.node(i);
  }
  const auto kp = profile_derivative(g, prof.f_plus, prof.boundary_plus);
  const auto km = profile_derivative(g, prof.f_minus, prof.boundary_minus);
  auto lap = [&](const std::vector<double>& u, std::size_t i) {
    const double r = g.node(i);
    return -(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) - (u[i + 1] - u[i - 1]) / (2.0 * h * r);
  };
  TildeReport rep;
  // K at the last node leans on the rim ghost and is only first-order accurate,
  // so its second difference is left out. The raw residual carries the 2/r^2
  // coefficient, which turns the O(h^2) profile error at the first few nodes
  // into an O(1) term; the reported norms use the system multiplied by r^2.
  for (std::size_t i = 1; i + 2 < n; ++i) {
    const double r = g.node(i), r2 = r * r;
    const auto c = coupling(prof, i);
    const double ef_p = lap(fp, i) + 2.0 / r2 * (fp[i] - kp[i]) + vp[i] * fp[i];
    const double ef_m = lap(fm, i) + 2.0 / r2 * (fm[i] - km[i]) + vm[i] * fm[i];
    const double ek_p = lap(kp, i) + 2.0 / r2 * (kp[i] - fp[i]) + vp[i] * kp[i] +
                        2.0 * lambda * (c[0] * kp[i] + c[1] * km[i]);
    const double ek_m = lap(km, i) + 2.0 / r2 * (km[i] - fm[i]) + vm[i] * km[i] +
                        2.0 * lambda * (c[2] * km[i] + c[1] * kp[i]);
    rep.raw_sup = std::max({rep.raw_sup, std::abs(ef_p), std::abs(ef_m), std::abs(ek_p), std::abs(ek_m)});
    rep.sup_f_plus = std::max(rep.sup_f_plus, r2 * std::abs(ef_p));
    rep.sup_f_minus = std::max(rep.sup_f_minus, r2 * std::abs(ef_m));
    rep.sup_k_plus = std::max(rep.sup_k_plus, r2 * std::abs(ek_p));
    rep.sup_k_minus = std::max(rep.sup_k_minus, r2 * std::abs(ek_m));
  }
  rep.sup = std::max({rep.sup_f_plus, rep.sup_f_minus, rep.sup_k_plus, rep.sup_k_minus});
  return rep;
}

double cubic_cutoff(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double s = 2.0 * (x - 0.5);
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

InstabilityWitness instability_direction(const Profile& prof, double cutoff_r) {
  require_profile(prof);
  const RadialGrid& g = prof.grid;
  if (!(cutoff_r > 0.0) || cutoff_r > g.radius() * (1.0 + 1e-12))
    throw InvalidArgument("cutoff radius must lie in (0, R]");
  const std::size_t n = g.n_cells();
  const auto dp = profile_derivative(g, prof.f_plus, prof.boundary_plus);
  const auto dm = profile_derivative(g, prof.f_minus, prof.boundary_minus);

  InstabilityWitness out;
  SpectralVector& v = out.direction;
  v.a0_plus.resize(n);
  v.a0_minus.resize(n);
  v.a2_plus.resize(n);
  v.a2_minus.resize(n);
  double limit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    const double eta = cubic_cutoff(r / cutoff_r);
    const double lp = prof.f_plus[i] / r, pp = dp[i];
    const double lm = -prof.f_minus[i] / r, pm = -dm[i];
    v.a0_plus[i] = 0.5 * (lp + pp) * eta;
    v.a2_plus[i] = 0.5 * (lp - pp) * eta;
    v.a0_minus[i] = 0.5 * (lm + pm) * eta;
    v.a2_minus[i] = 0.5 * (lm - pm) * eta;
    limit += g.weight(i) * prof.f_plus[i] * prof.f_minus[i] * dp[i] * dm[i];
  }
  out.limit_integral = -8.0 * M_PI * prof.params.b * limit;
  const auto m1 = assemble_M1(prof, prof.lambda);
  const auto x = pack_m1_vector(m1, v);
  out.q_breve = m1.form(x);
  out.mass = m1.mass_form(x) / kTwoPi;
  out.rayleigh = m1.stiffness.quadratic_form(x) / (m1.mass_form(x) / m1.form_scale);
  return out;
}

}  // namespace vortex
