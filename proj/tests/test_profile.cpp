#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vortex/error.hpp"
#include "vortex/modal.hpp"
#include "vortex/profile.hpp"
#include "vortex/spectral.hpp"

using namespace vortex;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("decoupled components match the scalar GL oracle") {
  const GLParams p{1.0, 2.0, 0.0, 1.0, 0.8};
  for (double lambda : {1.0, 50.0}) {
    ProfileOptions o;
    o.lambda = lambda;
    const auto prof = solve_profile(p, 1.0, 256, o);
    const oracle::ScalarGL sp{1.0, 256, lambda * p.a_plus, p.t_plus, p.t_plus};
    const oracle::ScalarGL sm{1.0, 256, lambda * p.a_minus, p.t_minus, p.t_minus};
    CHECK(sup_diff(prof.f_plus, sp.solve()) < 1e-10);
    CHECK(sup_diff(prof.f_minus, sm.solve()) < 1e-10);
  }
}

TEST_CASE("balanced case reduces to one scalar equation") {
  for (double b : {-0.5, 0.0, 0.3}) {
    ProfileOptions o;
    o.lambda = 30.0;
    const auto prof = solve_profile(balanced_params(b), 1.0, 512, o);
    CHECK(sup_diff(prof.f_plus, prof.f_minus) <= 1e-10);
    std::vector<double> u(prof.f_plus.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sqrt(2.0) * prof.f_plus[i];
    const oracle::ScalarGL s{1.0, 512, 30.0 * (1.0 + b) / 2.0, 1.0, 1.0};
    CHECK(s.strong_sup(u) < 1e-8);
  }
}

TEST_CASE("solver contract: residual, sign, sup bound, boundary") {
  const GLParams p{1.0, 2.0, 0.5, 1.0, 0.8};
  ProfileOptions o;
  o.lambda = 200.0;
  const auto s = solve_profile_report(p, 1.0, 1024, o);
  const auto res = profile_residual(s.profile);
  CHECK(res.sup_plus < 1e-9);
  CHECK(res.sup_minus < 1e-9);
  const double cap = sup_bound(p).cap_lambda;
  for (std::size_t i = 0; i < 1024; ++i) {
    CHECK(s.profile.f_plus[i] >= 0.0);
    CHECK(s.profile.f_minus[i] >= 0.0);
    CHECK(s.profile.f_plus[i] * s.profile.f_plus[i] + s.profile.f_minus[i] * s.profile.f_minus[i] <= cap * cap + 1e-8);
  }
  // f vanishes linearly at the origin
  CHECK(s.profile.f_plus[0] / s.profile.grid.node(0) < 100.0);

  double prev = 0.0;
  for (std::size_t n : {128, 256, 512, 1024}) {
    const auto prof = solve_profile(p, 1.0, n, o);
    const double ext = 1.5 * prof.f_plus[n - 1] - 0.5 * prof.f_plus[n - 2];
    const double err = std::abs(ext - p.t_plus);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.15));
    prev = err;
  }
}

TEST_CASE("initial guesses converge to the same profile") {
  const GLParams p{1.0, 2.0, 0.5, 1.0, 0.8};
  ProfileOptions o;
  o.lambda = 400.0;
  o.guess = InitialGuess::ramp;
  const auto a = solve_profile(p, 1.0, 1024, o);
  o.guess = InitialGuess::tanh;
  const auto b = solve_profile(p, 1.0, 1024, o);
  CHECK(sup_diff(a.f_plus, b.f_plus) < 1e-8);
  CHECK(sup_diff(a.f_minus, b.f_minus) < 1e-8);
}

TEST_CASE("solver errors") {
  CHECK_THROWS_AS(solve_profile(GLParams{1, 1, 2, 1, 1}, 1.0, 64), InvalidArgument);
  ProfileOptions o;
  o.lambda = 1e4;
  o.max_newton = 1;
  o.allow_continuation = false;
  o.guess = InitialGuess::ramp;
  CHECK_THROWS_AS(solve_profile(balanced_params(0.3), 1.0, 256, o), SolverError);
  try {
    solve_profile(balanced_params(0.3), 1.0, 256, o);
  } catch (const SolverError& e) {
    CHECK(e.last_residual() > 0.0);
    CHECK_FALSE(e.state().empty());
  }
}

TEST_CASE("profile residual diagnostics") {
  ProfileOptions o;
  o.lambda = 10.0;
  auto prof = solve_profile(balanced_params(0.2), 1.0, 256, o);
  const auto base = profile_residual(prof);
  CHECK(base.sup_plus < 1e-9);

  const std::size_t i = 128;
  const double h = prof.grid.h();
  prof.f_plus[i] += 1e-4;
  const auto bumped = profile_residual(prof);
  const double jump = std::abs(bumped.pointwise_plus[i] - base.pointwise_plus[i]);
  CHECK(jump == doctest::Approx(1e-4 * 2.0 / (h * h)).epsilon(0.02));

  Profile zero = prof;
  std::fill(zero.f_plus.begin(), zero.f_plus.end(), 0.0);
  std::fill(zero.f_minus.begin(), zero.f_minus.end(), 0.0);
  const auto zr = profile_residual(zero);
  // only the boundary row is hit: the ghost value pulls towards t
  CHECK(zr.abs_plus > 1.0);
  CHECK(std::abs(zr.pointwise_plus[0]) == 0.0);
  CHECK(std::abs(zr.pointwise_plus[255]) == zr.abs_plus);
}

TEST_CASE("energy") {
  for (double lambda : {1.0, 7.0}) {
    Profile zero;
    zero.grid = make_grid(1.0, 256);
    zero.params = balanced_params(0.0);
    zero.lambda = lambda;
    zero.boundary_plus = zero.boundary_minus = std::sqrt(0.5);
    zero.f_plus.assign(256, 0.0);
    zero.f_minus.assign(256, 0.0);
    const auto e = energy_parts(zero, lambda);
    CHECK(e.potential == doctest::Approx(lambda * M_PI / 8.0).epsilon(1e-13));
    CHECK(e.centrifugal == 0.0);
  }
  Profile flat;
  flat.grid = make_grid(1.0, 128);
  flat.params = GLParams{1.0, 2.0, 0.3, 0.9, 0.7};
  flat.boundary_plus = 0.9;
  flat.boundary_minus = 0.7;
  flat.f_plus.assign(128, 0.9);
  flat.f_minus.assign(128, 0.7);
  const auto ef = energy_parts(flat, 5.0);
  CHECK(ef.potential == 0.0);
  CHECK(ef.total == doctest::Approx(ef.gradient + ef.centrifugal));

  ProfileOptions o;
  o.lambda = 100.0;
  o.record_trace = true;
  const auto s = solve_profile_report(balanced_params(0.3), 1.0, 512, o);
  REQUIRE(s.trace.size() >= 2);
  // the last few Newton iterates decrease the energy
  for (std::size_t k = s.trace.size() >= 3 ? s.trace.size() - 3 : 1; k < s.trace.size(); ++k)
    CHECK(s.trace[k].energy <= s.trace[k - 1].energy + 1e-12 * std::abs(s.trace[k - 1].energy));
  CHECK(energy(s.profile, 100.0) <= s.trace.front().energy);
}

TEST_CASE("second variation: zero field, mode-1 fields and the FD oracle") {
  ProfileOptions o;
  o.lambda = 60.0;
  const auto prof = solve_profile(GLParams{1.0, 1.5, 0.4, 1.0, 0.9}, 1.0, 256, o);
  const auto& g = prof.grid;
  TestField none;
  CHECK(second_variation(prof, 60.0, none) == 0.0);

  std::vector<double> ap(256), am(256);
  for (std::size_t i = 0; i < 256; ++i) {
    const double x = g.node(i);
    ap[i] = x * (1.0 - x * x) * (1.0 + std::sin(5.0 * x));
    am[i] = x * (1.0 - x * x) * std::cos(3.0 * x);
  }
  ModeCoeffs m1;
  m1.n = 1;
  m1.plus.resize(256);
  m1.minus.resize(256);
  SUBCASE("imaginary mode-1 coefficients give the scalar blocks") {
    for (std::size_t i = 0; i < 256; ++i) {
      m1.plus[i] = {0.0, ap[i]};
      m1.minus[i] = {0.0, am[i]};
    }
    const auto q0 = assemble_Q0(prof, 60.0);
    const double ref = q0.plus.form(ap) + q0.minus.form(am);
    CHECK(second_variation(prof, 60.0, TestField{{m1}}) == doctest::Approx(ref).epsilon(1e-10));
  }
  SUBCASE("real mode-1 coefficients pick up the coupling") {
    for (std::size_t i = 0; i < 256; ++i) {
      m1.plus[i] = {ap[i], 0.0};
      m1.minus[i] = {am[i], 0.0};
    }
    const auto q0 = assemble_Q0_full(prof, 60.0);
    std::vector<double> x(q0.dim(), 0.0);
    q0.set_component(x, 0, ap);
    q0.set_component(x, 1, am);
    CHECK(second_variation(prof, 60.0, TestField{{m1}}) == doctest::Approx(q0.form(x)).epsilon(1e-10));
  }
  SUBCASE("symmetric differences of the energy") {
    for (std::uint64_t seed : {11u, 12u}) {
      const auto phi = random_test_field(g, -2, 4, seed);
      const double e2 = second_variation(prof, 60.0, phi);
      const double e0 = field_energy(prof, 60.0, phi, 0.0);
      auto fd = [&](double eps) {
        return (field_energy(prof, 60.0, phi, eps) + field_energy(prof, 60.0, phi, -eps) - 2.0 * e0) / (eps * eps);
      };
      const double d1 = std::abs(fd(1e-3) - e2), d2 = std::abs(fd(5e-4) - e2);
      CHECK(d1 / d2 >= 3.5);
      CHECK(d1 / d2 <= 4.5);
      CHECK(d1 < 1e-4 * std::abs(e2));
    }
  }
  SUBCASE("rejects fields that do not vanish at the rim") {
    auto phi = random_test_field(g, 0, 2, 3);
    phi.modes[1].rim_plus = {0.1, 0.0};
    CHECK_THROWS_AS(second_variation(prof, 60.0, phi), InvalidArgument);
  }
}

TEST_CASE("direct and blockwise second variation agree") {
  ProfileOptions o;
  o.lambda = 150.0;
  const auto prof = solve_profile(GLParams{1.2, 0.8, -0.3, 0.9, 1.1}, 1.0, 384, o);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto phi = random_test_field(prof.grid, -2, 4, seed);
    const auto parts = second_variation_parts(prof, 150.0, phi);
    CHECK(std::abs(parts.direct - parts.blockwise) <= 1e-10 * std::abs(parts.direct));
  }
}

TEST_CASE("closed-form asymptotic coefficients") {
  for (double b : {-0.5, 0.0, 0.3}) {
    const auto a = closed_form_asymptotics(balanced_params(b));
    CHECK(a.a_plus == doctest::Approx(-1.0 / (std::sqrt(2.0) * (1.0 + b))).epsilon(1e-14));
    CHECK(a.a_minus == doctest::Approx(a.a_plus).epsilon(1e-14));
  }
  CHECK(closed_form_asymptotics(balanced_params(0.0)).a_plus == doctest::Approx(-0.70711).epsilon(1e-5));
  const GLParams p{1.7, 0.6, 0.0, 0.8, 1.3};
  CHECK(closed_form_asymptotics(p).a_plus == doctest::Approx(-1.0 / (2.0 * 1.7 * 0.8)).epsilon(1e-14));
  CHECK(closed_form_asymptotics(p).a_minus == doctest::Approx(-1.0 / (2.0 * 0.6 * 1.3)).epsilon(1e-14));
  // min(A+, A-) < B < sqrt(A+ A-): exactly one positive coefficient
  const auto c = closed_form_asymptotics(GLParams{1.0, 0.9, 0.92, 1.0, 1.0});
  CHECK(((c.a_plus > 0.0) != (c.a_minus > 0.0)));
}

TEST_CASE("entire-solution approximations, tail fits, monotonicity") {
  SUBCASE("tail fits against the closed form") {
    const auto prof = entire_solution_approx(balanced_params(0.0), 40.0, 4096, false);
    CHECK(prof.radius_is_rescaled);
    const auto fit = tail_fit(prof);
    CHECK(fit.coeffs.a_plus == doctest::Approx(-0.70711).epsilon(0.05));
    const auto prof3 = entire_solution_approx(balanced_params(0.3), 40.0, 4096, false);
    CHECK(tail_fit(prof3).coeffs.a_plus == doctest::Approx(-1.0 / (std::sqrt(2.0) * 1.3)).epsilon(0.05));
    const auto corrected = entire_solution_approx(balanced_params(0.0), 40.0, 4096, true);
    CHECK(tail_fit(corrected).coeffs.a_plus == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(0.01));
    const auto inner = tail_fit(corrected, 8.0, 16.0), outer = tail_fit(corrected, 16.0, 32.0);
    CHECK(outer.residual_plus < inner.residual_plus);
    CHECK_THROWS_AS(tail_fit(corrected, 10.0, 50.0), InvalidArgument);
  }
  SUBCASE("plain and corrected boundary data differ by O(R^-2)") {
    double d[2];
    int k = 0;
    for (double radius : {20.0, 40.0}) {
      const auto n = static_cast<std::size_t>(51.2 * radius);
      const auto a = entire_solution_approx(balanced_params(0.0), radius, n, false);
      const auto b = entire_solution_approx(balanced_params(0.0), radius, n, true);
      d[k++] = sup_diff(a.f_plus, b.f_plus);
    }
    CHECK(d[0] / d[1] == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("slope at the origin stays bounded") {
    double prev = 0.0;
    for (std::size_t n : {1024, 2048, 4096}) {
      const auto p = entire_solution_approx(balanced_params(0.0), 20.0, n, true);
      const double slope = p.f_plus[0] / p.grid.node(0);
      if (prev > 0.0) CHECK(slope == doctest::Approx(prev).epsilon(1e-3));
      prev = slope;
    }
  }
  SUBCASE("monotonicity") {
    for (double b : {-0.5, 0.1}) {
      const auto m = monotonicity_check(entire_solution_approx(balanced_params(b), 40.0, 4096, false), 1e-10);
      CHECK(m.plus_monotone);
      CHECK(m.minus_monotone);
    }
    const auto m = monotonicity_check(entire_solution_approx(GLParams{1.0, 0.9, 0.9, 1.0, 1.0}, 40.0, 4096, false), 1e-10);
    CHECK_FALSE((m.plus_monotone && m.minus_monotone));
  }
}
