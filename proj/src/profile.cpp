#include "vortex/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

namespace {

struct Coupled {
  double ap, am, b, tp2, tm2;
  explicit Coupled(const GLParams& p)
      : ap(p.a_plus), am(p.a_minus), b(p.b), tp2(p.t_plus * p.t_plus), tm2(p.t_minus * p.t_minus) {}
  double v_plus(double fp, double fm) const { return ap * (fp * fp - tp2) + b * (fm * fm - tm2); }
  double v_minus(double fp, double fm) const { return am * (fm * fm - tm2) + b * (fp * fp - tp2); }
};

// (K f)_i for the mode-1 radial stiffness, without the boundary data.
double stiffness_row(const RadialGrid& g, std::span<const double> f, std::size_t i) {
  const std::size_t n = g.n_cells();
  double s = 0.0;
  if (i > 0) s += static_cast<double>(i) * (f[i] - f[i - 1]);
  if (i + 1 < n) s += static_cast<double>(i + 1) * (f[i] - f[i + 1]);
  else s += 2.0 * static_cast<double>(n) * f[i];
  const double r = g.node(i);
  return s + g.weight(i) / (r * r) * f[i];
}

double stiffness_row_abs(const RadialGrid& g, std::span<const double> f, std::size_t i) {
  const std::size_t n = g.n_cells();
  const double left = static_cast<double>(i);
  double s = 0.0;
  if (i > 0) s += left * (std::abs(f[i]) + std::abs(f[i - 1]));
  if (i + 1 < n) s += (left + 1.0) * (std::abs(f[i]) + std::abs(f[i + 1]));
  else s += 2.0 * static_cast<double>(n) * std::abs(f[i]);
  const double r = g.node(i);
  return s + g.weight(i) / (r * r) * std::abs(f[i]);
}

struct State {
  const RadialGrid* grid;
  Coupled c;
  double lambda;
  double gp, gm;
};

// Weak residual, interleaved (node, component).
std::vector<double> weak_residual(const State& s, std::span<const double> fp, std::span<const double> fm) {
  const std::size_t n = s.grid->n_cells();
  std::vector<double> r(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = s.grid->weight(i);
    r[2 * i] = stiffness_row(*s.grid, fp, i) + w * s.lambda * s.c.v_plus(fp[i], fm[i]) * fp[i];
    r[2 * i + 1] = stiffness_row(*s.grid, fm, i) + w * s.lambda * s.c.v_minus(fp[i], fm[i]) * fm[i];
  }
  const double rim = 2.0 * static_cast<double>(n);
  r[2 * (n - 1)] -= rim * s.gp;
  r[2 * (n - 1) + 1] -= rim * s.gm;
  return r;
}

std::pair<double, double> scaled_sup(const State& s, std::span<const double> fp, std::span<const double> fm,
                                     std::span<const double> r) {
  const std::size_t n = s.grid->n_cells();
  const double rim = 2.0 * static_cast<double>(n);
  double sp = 0.0, sm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = s.grid->weight(i);
    double dp = stiffness_row_abs(*s.grid, fp, i) + w * s.lambda * std::abs(s.c.v_plus(fp[i], fm[i]) * fp[i]);
    double dm = stiffness_row_abs(*s.grid, fm, i) + w * s.lambda * std::abs(s.c.v_minus(fp[i], fm[i]) * fm[i]);
    if (i + 1 == n) {
      dp += rim * std::abs(s.gp);
      dm += rim * std::abs(s.gm);
    }
    if (dp > 0.0) sp = std::max(sp, std::abs(r[2 * i]) / dp);
    if (dm > 0.0) sm = std::max(sm, std::abs(r[2 * i + 1]) / dm);
  }
  return {sp, sm};
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double discrete_energy(const State& s, std::span<const double> fp, std::span<const double> fm) {
  Profile tmp;
  tmp.grid = *s.grid;
  tmp.f_plus.assign(fp.begin(), fp.end());
  tmp.f_minus.assign(fm.begin(), fm.end());
  tmp.boundary_plus = s.gp;
  tmp.boundary_minus = s.gm;
  tmp.params = GLParams{s.c.ap, s.c.am, s.c.b, std::sqrt(s.c.tp2), std::sqrt(s.c.tm2)};
  return energy(tmp, s.lambda);
}

struct NewtonOutcome {
  bool ok = false;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
};

NewtonOutcome newton(const State& s, std::vector<double>& fp, std::vector<double>& fm, const ProfileOptions& opts,
                     std::vector<NewtonRecord>* trace) {
  const RadialGrid& g = *s.grid;
  const std::size_t n = g.n_cells();
  const int modes[] = {1, 1};
  const BlockOperator base = make_block(g, modes);
  const std::vector<double> unit(2 * n, 1.0);

  NewtonOutcome out;
  auto res = weak_residual(s, fp, fm);
  double rnorm = norm2(res);
  int polish = 0;
  for (int it = 0; it < opts.max_newton; ++it) {
    const auto [sp, sm] = scaled_sup(s, fp, fm, res);
    out.residual = std::max(sp, sm);
    if (!std::isfinite(out.residual)) return out;
    if (out.residual < opts.tol) {
      // A couple of extra steps take the iterate down to round-off.
      if (polish++ >= 2) {
        out.ok = true;
        return out;
      }
    }

    SymmetricBand jac = base.stiffness;
    for (std::size_t i = 0; i < n; ++i) {
      const double wl = g.weight(i) * s.lambda;
      jac.add(2 * i, 2 * i, wl * (s.c.v_plus(fp[i], fm[i]) + 2.0 * s.c.ap * fp[i] * fp[i]));
      jac.add(2 * i + 1, 2 * i + 1, wl * (s.c.v_minus(fp[i], fm[i]) + 2.0 * s.c.am * fm[i] * fm[i]));
      jac.add(2 * i + 1, 2 * i, wl * 2.0 * s.c.b * fp[i] * fm[i]);
    }
    BandLDLT lu;
    if (!lu.factor(jac, unit, 0.0)) return out;
    std::vector<double> delta(res);
    lu.solve(delta);

    double alpha = 1.0;
    std::vector<double> tp(n), tm(n);
    bool accepted = false;
    while (alpha > 1e-4) {
      for (std::size_t i = 0; i < n; ++i) {
        tp[i] = fp[i] - alpha * delta[2 * i];
        tm[i] = fm[i] - alpha * delta[2 * i + 1];
      }
      auto trial = weak_residual(s, tp, tm);
      const double tn = norm2(trial);
      if (std::isfinite(tn) && tn < (1.0 - 1e-4 * alpha) * rnorm) {
        res = std::move(trial);
        rnorm = tn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (trace)
      trace->push_back(NewtonRecord{it, out.residual, accepted ? alpha : 0.0, discrete_energy(s, fp, fm)});
    if (!accepted) {
      // No further decrease: at round-off this is convergence, otherwise failure.
      out.ok = out.residual < opts.tol;
      return out;
    }
    fp.swap(tp);
    fm.swap(tm);
    out.iterations = it + 1;
  }
  const auto [sp, sm] = scaled_sup(s, fp, fm, res);
  out.residual = std::max(sp, sm);
  out.ok = out.residual < opts.tol;
  return out;
}

void initial_guess(const RadialGrid& g, double lambda, double gp, double gm, InitialGuess kind,
                   std::vector<double>& fp, std::vector<double>& fm) {
  const std::size_t n = g.n_cells();
  fp.resize(n);
  fm.resize(n);
  const double core = 1.0 / std::sqrt(lambda);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    double shape = 0.0;
    switch (kind) {
      case InitialGuess::standard: shape = r / std::sqrt(r * r + core * core); break;
      case InitialGuess::ramp: shape = r / g.radius(); break;
      case InitialGuess::tanh: shape = std::tanh(r / core); break;
    }
    fp[i] = gp * shape;
    fm[i] = gm * shape;
  }
}

bool nonnegative(std::span<const double> f) {
  return std::all_of(f.begin(), f.end(), [](double x) { return x >= -1e-10; });
}

}  // namespace

ProfileSolve solve_profile_report(const GLParams& p, double radius, std::size_t n_cells, const ProfileOptions& opts) {
  require_valid(p);
  if (!(opts.lambda > 0.0) || !std::isfinite(opts.lambda)) throw InvalidArgument("lambda must be positive");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const RadialGrid grid = make_grid(radius, n_cells);
  const double gp = opts.boundary ? opts.boundary->first : p.t_plus;
  const double gm = opts.boundary ? opts.boundary->second : p.t_minus;
  if (!(gp >= 0.0) || !(gm >= 0.0)) throw InvalidArgument("boundary values must be nonnegative");

  ProfileSolve out;
  std::vector<NewtonRecord>* trace = opts.record_trace ? &out.trace : nullptr;
  std::vector<double> fp, fm;
  auto finish = [&](std::vector<double> plus, std::vector<double> minus) {
    out.profile.grid = grid;
    out.profile.f_plus = std::move(plus);
    out.profile.f_minus = std::move(minus);
    out.profile.params = p;
    out.profile.lambda = opts.lambda;
    out.profile.boundary_plus = gp;
    out.profile.boundary_minus = gm;
    const auto r = profile_residual(out.profile);
    out.residual_plus = r.sup_plus;
    out.residual_minus = r.sup_minus;
    return out;
  };

  auto attempt = [&](const GLParams& q, double lam, std::vector<double>& a, std::vector<double>& b) {
    State s{&grid, Coupled(q), lam, gp, gm};
    if (trace) trace->clear();
    auto r = newton(s, a, b, opts, trace);
    out.newton_iterations += r.iterations;
    ++out.continuation_stages;
    return std::pair{r.ok && nonnegative(a) && nonnegative(b), r.residual};
  };

  initial_guess(grid, opts.lambda, gp, gm, opts.guess, fp, fm);
  const auto [direct_ok, direct_res] = attempt(p, opts.lambda, fp, fm);
  if (direct_ok) return finish(fp, fm);
  if (!opts.allow_continuation) throw SolverError("Newton did not converge", direct_res, "direct solve");

  // Continuation: decoupled problem at a moderate lambda, then B, then lambda.
  const double lam0 = std::min(opts.lambda, 1.0);
  GLParams q = p;
  q.b = 0.0;
  initial_guess(grid, lam0, gp, gm, opts.guess, fp, fm);
  double last_res = 0.0;
  {
    auto [ok, r] = attempt(q, lam0, fp, fm);
    last_res = r;
    if (!ok) throw SolverError("continuation start did not converge", r, "B = 0, lambda = " + std::to_string(lam0));
  }
  auto march = [&](double from, double to, double step, bool geometric, auto apply) {
    double cur = from;
    double h = step;
    while (cur != to) {
      double next = geometric ? std::min(to, cur * h) : (to > cur ? std::min(to, cur + h) : std::max(to, cur - h));
      auto a = fp, b = fm;
      apply(next);
      auto [ok, r] = attempt(q, geometric ? next : lam0, a, b);
      last_res = r;
      if (ok) {
        fp.swap(a);
        fm.swap(b);
        cur = next;
        continue;
      }
      h = geometric ? std::sqrt(h) : 0.5 * h;
      if ((geometric && h < 1.0 + 1e-4) || (!geometric && h < 1e-4)) {
        std::ostringstream st;
        st << (geometric ? "lambda" : "B") << " continuation stalled at " << cur << " toward " << to;
        throw SolverError("profile continuation failed", last_res, st.str());
      }
    }
  };
  march(0.0, p.b, 0.1, false, [&](double v) { q.b = v; });
  q.b = p.b;
  if (opts.lambda > lam0) march(lam0, opts.lambda, 2.0, true, [](double) {});
  return finish(fp, fm);
}

Profile solve_profile(const GLParams& p, double radius, std::size_t n_cells, const ProfileOptions& opts) {
  return solve_profile_report(p, radius, n_cells, opts).profile;
}

ProfileResidual profile_residual(const Profile& prof) {
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  if (prof.f_plus.size() != n || prof.f_minus.size() != n) throw InvalidArgument("profile arrays do not match grid");
  State s{&g, Coupled(prof.params), prof.lambda, prof.boundary_plus, prof.boundary_minus};
  const auto r = weak_residual(s, prof.f_plus, prof.f_minus);
  ProfileResidual out;
  std::tie(out.sup_plus, out.sup_minus) = scaled_sup(s, prof.f_plus, prof.f_minus, r);
  out.pointwise_plus.resize(n);
  out.pointwise_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.pointwise_plus[i] = r[2 * i] / g.weight(i);
    out.pointwise_minus[i] = r[2 * i + 1] / g.weight(i);
    out.abs_plus = std::max(out.abs_plus, std::abs(out.pointwise_plus[i]));
    out.abs_minus = std::max(out.abs_minus, std::abs(out.pointwise_minus[i]));
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> potentials(const Profile& prof, double lambda) {
  const Coupled c(prof.params);
  const std::size_t n = prof.grid.n_cells();
  std::vector<double> vp(n), vm(n);
  for (std::size_t i = 0; i < n; ++i) {
    vp[i] = lambda * c.v_plus(prof.f_plus[i], prof.f_minus[i]);
    vm[i] = lambda * c.v_minus(prof.f_plus[i], prof.f_minus[i]);
  }
  return {std::move(vp), std::move(vm)};
}

EnergyParts energy_parts(const Profile& prof, double lambda) {
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  if (prof.f_plus.size() != n || prof.f_minus.size() != n) throw InvalidArgument("profile arrays do not match grid");
  const Coupled c(prof.params);
  EnergyParts e;
  auto grad = [&](const std::vector<double>& f, double boundary) {
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) s += static_cast<double>(j) * (f[j] - f[j - 1]) * (f[j] - f[j - 1]);
    const double d = boundary - f[n - 1];
    return s + 2.0 * static_cast<double>(n) * d * d;
  };
  e.gradient = M_PI * (grad(prof.f_plus, prof.boundary_plus) + grad(prof.f_minus, prof.boundary_minus));
  double cf = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    const double fp = prof.f_plus[i], fm = prof.f_minus[i];
    cf += g.weight(i) * (fp * fp + fm * fm) / (r * r);
    const double dp = fp * fp - c.tp2, dm = fm * fm - c.tm2;
    pot += g.weight(i) * (c.ap * dp * dp + c.am * dm * dm + 2.0 * c.b * dp * dm);
  }
  e.centrifugal = M_PI * cf;
  e.potential = 0.5 * lambda * M_PI * pot;
  e.total = e.gradient + e.centrifugal + e.potential;
  return e;
}

double energy(const Profile& prof, double lambda) { return energy_parts(prof, lambda).total; }

AsymptoticCoeffs closed_form_asymptotics(const GLParams& p) {
  require_valid(p);
  const double det = p.a_plus * p.a_minus - p.b * p.b;
  return {0.5 * (p.b - p.a_minus) / (det * p.t_plus), 0.5 * (p.b - p.a_plus) / (det * p.t_minus)};
}

TailFit tail_fit(const Profile& prof, double r_lo, double r_hi) {
  const RadialGrid& g = prof.grid;
  if (!(r_lo > 0.0) || !(r_hi <= g.radius()) || !(r_lo < r_hi))
    throw InvalidArgument("tail-fit window must satisfy 0 < r_lo < r_hi <= R");
  TailFit out;
  double sp = 0.0, sm = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    const double r = g.node(i);
    if (r < r_lo || r > r_hi) continue;
    const double yp = r * r * (prof.f_plus[i] - prof.params.t_plus);
    const double ym = r * r * (prof.f_minus[i] - prof.params.t_minus);
    samples.emplace_back(yp, ym);
    sp += yp;
    sm += ym;
  }
  if (samples.empty()) throw InvalidArgument("tail-fit window contains no nodes");
  out.n_points = samples.size();
  const double k = static_cast<double>(samples.size());
  out.coeffs = {sp / k, sm / k};
  double vp = 0.0, vm = 0.0;
  for (auto [yp, ym] : samples) {
    vp += (yp - out.coeffs.a_plus) * (yp - out.coeffs.a_plus);
    vm += (ym - out.coeffs.a_minus) * (ym - out.coeffs.a_minus);
  }
  out.residual_plus = std::sqrt(vp / k);
  out.residual_minus = std::sqrt(vm / k);
  return out;
}

TailFit tail_fit(const Profile& prof) {
  return tail_fit(prof, 0.6 * prof.grid.radius(), 0.9 * prof.grid.radius());
}

MonotonicityReport monotonicity_check(const Profile& prof, double tol) {
  MonotonicityReport out;
  auto worst = [](const std::vector<double>& f, double boundary) {
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) w = std::min(w, f[i + 1] - f[i]);
    return std::min(w, boundary - f.back());
  };
  out.worst_plus = worst(prof.f_plus, prof.boundary_plus);
  out.worst_minus = worst(prof.f_minus, prof.boundary_minus);
  out.plus_monotone = out.worst_plus >= -tol * prof.params.t_plus;
  out.minus_monotone = out.worst_minus >= -tol * prof.params.t_minus;
  return out;
}

Profile entire_solution_approx(const GLParams& p, double radius, std::size_t n_cells, bool corrected_bc) {
  ProfileOptions opts;
  opts.lambda = 1.0;
  if (corrected_bc) {
    const auto a = closed_form_asymptotics(p);
    const double r2 = radius * radius;
    opts.boundary = std::pair{p.t_plus + a.a_plus / r2, p.t_minus + a.a_minus / r2};
  }
  Profile prof = solve_profile(p, radius, n_cells, opts);
  prof.radius_is_rescaled = true;
  return prof;
}

std::vector<double> profile_derivative(const RadialGrid& grid, const std::vector<double>& f, double boundary) {
  const std::size_t n = grid.n_cells();
  std::vector<double> d(n);
  const double h2 = 2.0 * grid.h();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? -f[0] : f[i - 1];
    const double right = i + 1 == n ? 2.0 * boundary - f[n - 1] : f[i + 1];
    d[i] = (right - left) / h2;
  }
  return d;
}

double rim_derivative(const RadialGrid& grid, const std::vector<double>& f, double boundary) {
  const std::size_t n = grid.n_cells();
  const double h = grid.h();
  return (8.0 * boundary - 9.0 * f[n - 1] + f[n - 2]) / (3.0 * h);
}

}  // namespace vortex
