// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <lapacke.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vortex/io.hpp"
#include "vortex/modal.hpp"
#include "vortex/polar.hpp"
#include "vortex/stability.hpp"

#ifndef VORTEX_CLI_PATH
#error "VORTEX_CLI_PATH must name the vortex executable"
#endif

using namespace vortex;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Every profile built by the suite, for the sup bound criterion.
std::vector<Profile>& all_profiles() {
  static std::vector<Profile> v;
  return v;
}

Profile keep(Profile p) {
  all_profiles().push_back(p);
  return p;
}

Profile unit_profile(const GLParams& p, double lambda, std::size_t n = 2048) {
  ProfileOptions o;
  o.lambda = lambda;
  return keep(solve_profile(p, 1.0, n, o));
}

// |K v - mu M v|_2 / |M v|_2
double plain_residual(const SymmetricBand& k, const std::vector<double>& mass, const Eigenpair& e) {
  const auto kv = k.multiply(e.vector);
  double r = 0.0, m = 0.0;
  for (std::size_t i = 0; i < kv.size(); ++i) {
    const double mv = mass[i] * e.vector[i];
    r += (kv[i] - e.value * mv) * (kv[i] - e.value * mv);
    m += mv * mv;
  }
  return std::sqrt(r / m);
}

double worst_eigen_residual = 0.0;

Eigenpair checked_ground(const BlockOperator& op) {
  auto e = ground_eigenpair(op, std::nan(""));
  worst_eigen_residual = std::max(worst_eigen_residual, plain_residual(op.stiffness, op.mass, e));
  return e;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

Outcome c1_decoupled_profile() {
  const GLParams p{1.0, 2.0, 0.0, 1.0, 0.8};
  const auto prof = keep(solve_profile(p, 20.0, 2048));
  const oracle::ScalarGL op{20.0, 2048, p.a_plus, p.t_plus, p.t_plus};
  const oracle::ScalarGL om{20.0, 2048, p.a_minus, p.t_minus, p.t_minus};
  const double d = std::max(sup_diff(prof.f_plus, op.solve()), sup_diff(prof.f_minus, om.solve()));
  return {d < 1e-8, fmt("max node difference vs scalar GL oracle %.3e (< 1e-8)", d)};
}

Outcome c2_balanced_reduction() {
  bool ok = true;
  std::string detail;
  for (double b : {-0.5, 0.3}) {
    const auto prof = keep(solve_profile(balanced_params(b), 20.0, 2048));
    const double sym = sup_diff(prof.f_plus, prof.f_minus);
    std::vector<double> u(prof.f_plus.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sqrt(2.0) * prof.f_plus[i];
    const oracle::ScalarGL s{20.0, 2048, (1.0 + b) / 2.0, 1.0, 1.0};
    const double res = s.strong_sup(u);
    ok = ok && sym <= 1e-10 && res <= 1e-8;
    detail += fmt("B=%g: ", b) + fmt("|f+-f-| %.2e, ", sym) + fmt("scalar residual %.2e; ", res);
  }
  return {ok, detail};
}

Outcome c3_asymptotics() {
  bool ok = true;
  std::string detail;
  for (double b : {-0.3, 0.0, 0.3}) {
    const auto prof = keep(entire_solution_approx(balanced_params(b), 40.0, 4096, true));
    const auto fit = tail_fit(prof);
    const auto exact = closed_form_asymptotics(prof.params);
    const double rel = std::max(std::abs(fit.coeffs.a_plus / exact.a_plus - 1.0),
                                std::abs(fit.coeffs.a_minus / exact.a_minus - 1.0));
    ok = ok && rel < (b == 0.0 ? 0.01 : 0.05);
    detail += fmt("B=%g: ", b) + fmt("rel err %.3f%%; ", 100.0 * rel);
  }
  return {ok, detail};
}

Outcome c4_fd_oracle() {
  const double lambda = 100.0;
  const auto prof = unit_profile(balanced_params(0.3), lambda, 512);
  bool ok = true;
  double worst_order = 2.0, worst_rel = 0.0;
  for (std::uint64_t seed = 101; seed <= 105; ++seed) {
    const auto phi = random_test_field(prof.grid, -2, 4, seed);
    const double e2 = second_variation(prof, lambda, phi);
    const double e0 = field_energy(prof, lambda, phi, 0.0);
    auto quotient = [&](double eps) {
      return (field_energy(prof, lambda, phi, eps) + field_energy(prof, lambda, phi, -eps) - 2.0 * e0) / (eps * eps);
    };
    const double d1 = std::abs(quotient(1e-3) - e2), d2 = std::abs(quotient(5e-4) - e2);
    const double order = std::log2(d1 / d2), rel = d1 / std::abs(e2);
    ok = ok && std::abs(order - 2.0) <= 0.3 && rel < 1e-4;
    if (std::abs(order - 2.0) > std::abs(worst_order - 2.0)) worst_order = order;
    worst_rel = std::max(worst_rel, rel);
  }
  return {ok, fmt("5 fields: worst observed order %.3f, ", worst_order) + fmt("worst rel err at 1e-3 %.2e", worst_rel)};
}

Outcome c5_block_decomposition() {
  const auto prof = unit_profile(GLParams{1.2, 0.8, 0.35, 0.9, 1.1}, 200.0, 1024);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto parts = second_variation_parts(prof, 200.0, random_test_field(prof.grid, -2, 4, seed));
    worst = std::max(worst, std::abs(parts.direct - parts.blockwise) / std::abs(parts.direct));
  }
  return {worst <= 1e-10, fmt("modes -2..4, worst relative difference %.2e", worst)};
}

Outcome c6_mu0_positive() {
  double worst = INFINITY;
  for (double b : {-0.7, -0.3, 0.0, 0.3, 0.6}) {
    const GLParams p = balanced_params(b);
    if (!validate_params(p)) return {false, "B=" + std::to_string(b) + " not admissible"};
    for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
      const auto prof = unit_profile(p, lambda);
      const auto q0 = assemble_Q0(prof, lambda);
      worst = std::min({worst, checked_ground(q0.plus).value, checked_ground(q0.minus).value});
    }
  }
  return {worst > 1e-10, fmt("min mu0 over 20 points %.6g", worst)};
}

Outcome c7_mu1_positive_for_negative_b() {
  double worst = INFINITY;
  for (double b : {-0.1, -0.3, -0.5, -0.7})
    for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
      const auto prof = unit_profile(balanced_params(b), lambda);
      worst = std::min(worst, checked_ground(assemble_M1(prof, lambda)).value);
    }
  return {worst > 0.0, fmt("min mu1 over 16 points %.6g", worst)};
}

Outcome c8_threshold() {
  const GLParams p = balanced_params(0.3);
  const auto big = keep(entire_solution_approx(p, 40.0, 4096, false));
  const double mu_big = 1600.0 * checked_ground(assemble_M1(big, 1.0)).value;
  const double small = 0.5 * small_lambda_uniqueness_bound(p);
  const double mu_small = checked_ground(assemble_M1(unit_profile(p, small), small)).value;
  const auto r = find_lambda_star(p, 1e4, 1e-3);
  const bool detected = r.status == ThresholdStatus::detected;
  const double width = detected ? r.bracket.second / r.bracket.first - 1.0 : INFINITY;
  const bool ok = mu_big < 0.0 && mu_small > 0.0 && detected && width <= 1e-3 && r.sign_changes.size() == 1;
  return {ok, fmt("mu1(1600, R=40 frame) %.4g, ", mu_big) + fmt("mu1(lambda^*/2) %.4g, ", mu_small) +
                  fmt("lambda* %.6g, ", r.lambda_star) + fmt("bracket width %.2e, ", width) +
                  "sign changes " + std::to_string(r.sign_changes.size())};
}

Outcome c9_witness() {
  const auto p3 = keep(entire_solution_approx(balanced_params(0.3), 40.0, 4096, true));
  const auto w = instability_direction(p3, 40.0);
  const double rel = std::abs(w.q_breve - w.limit_integral) / std::abs(w.limit_integral);
  const auto p0 = keep(entire_solution_approx(balanced_params(0.0), 40.0, 4096, true));
  const double zero = instability_direction(p0, 40.0).limit_integral;
  const bool ok = w.q_breve < 0.0 && rel < 0.1 && std::abs(zero) <= 1e-14;
  return {ok, fmt("Q %.5f, ", w.q_breve) + fmt("limit %.5f, ", w.limit_integral) + fmt("rel %.3f, ", rel) +
                  fmt("B=0 limit %.1e", zero)};
}

Outcome c10_l1_m1() {
  bool ok = true;
  std::string detail;
  for (auto [b, lambda] : {std::pair{-0.5, 100.0}, std::pair{0.3, 1600.0}}) {
    const auto prof = unit_profile(balanced_params(b), lambda);
    const auto m1 = assemble_M1(prof, lambda);
    const auto gm = checked_ground(m1);
    const auto gl = checked_ground(assemble_L1_complex(prof, lambda));
    const auto rep = simplicity_and_sign(m1, gm);
    const double diff = std::abs(gm.value - gl.value);
    ok = ok && diff <= 1e-9 * std::max(1.0, std::abs(gm.value)) && rep.simple && rep.gap > 1e-8 && rep.ordered;
    detail += fmt("(B=%g", b) + fmt(", lambda=%g): ", lambda) + fmt("|L1-M1| %.1e, ", diff) + fmt("gap %.4g, ", rep.gap) +
              fmt("ordering violation %.1e; ", rep.worst_violation);
  }
  return {ok, detail};
}

// Lowest eigenvalue of M^{-1/2} K M^{-1/2} from the dense LAPACK symmetric solver.
double dense_ground(const PolarOperator& op) {
  const auto n = static_cast<lapack_int>(op.dim());
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  const std::size_t bw = op.stiffness.bandwidth();
  for (std::size_t j = 0; j < op.dim(); ++j)
    for (std::size_t i = j; i <= std::min(op.dim() - 1, j + bw); ++i)
      a[j * n + i] = op.stiffness(i, j) / std::sqrt(op.mass[i] * op.mass[j]);  // column-major lower
  lapack_int m = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> isuppz(2);
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0, &m,
                                         w.data(), nullptr, 1, isuppz.data());
  if (info != 0 || m != 1) throw std::runtime_error("dsyevr failed");
  return w[0];
}

Outcome c11_crosscheck() {
  const GLParams p = balanced_params(0.3);
  const double lambda = 400.0;
  const auto c = muequal_crosscheck(p, lambda, 8, 32, 64);
  ProfileOptions o;
  o.lambda = lambda;
  const auto prof = keep(solve_profile(p, 1.0, 64, o));
  const auto op = assemble_polar_operator(prof, lambda, 32);
  const double dense = dense_ground(op);
  const double rel = std::abs(dense - c.block_min) / std::abs(c.block_min);
  bool higher = true;
  for (const auto& b : c.blocks)
    if (b.n >= 2) higher = higher && b.mu > c.block_min;
  const bool ok = (c.argmin_block == 0 || c.argmin_block == 1) && higher && rel <= 1e-8;
  return {ok, std::to_string(op.dim()) + " unknowns: dense ground " + fmt("%.10g, ", dense) +
                  fmt("block min %.10g ", c.block_min) + "at n=" + std::to_string(c.argmin_block) +
                  fmt(", rel diff %.1e, ", rel) + (higher ? "n=2..8 above" : "some n>=2 not above")};
}

Outcome c12_sup_bound() {
  double worst = -INFINITY;
  for (const auto& prof : all_profiles()) {
    const double cap = sup_bound(prof.params).cap_lambda;
    for (std::size_t i = 0; i < prof.f_plus.size(); ++i)
      worst = std::max(worst, prof.f_plus[i] * prof.f_plus[i] + prof.f_minus[i] * prof.f_minus[i] - cap * cap);
  }
  return {worst <= 1e-8, std::to_string(all_profiles().size()) + " profiles, " + fmt("max(f+^2+f-^2) - Lambda^2 = %.3e", worst)};
}

Outcome c13_bessel() {
  bool ok = true;
  std::string detail;
  for (int m : {0, 1}) {
    const double z = oracle::bessel_zero(m, 1), target = z * z;
    double prev = 0.0;
    detail += "m=" + std::to_string(m) + " ratios";
    for (std::size_t n : {256, 512, 1024, 2048}) {
      const auto g = make_grid(1.0, n);
      const double err = std::abs(checked_ground(scalar_radial_operator(g, m, std::vector<double>(n, 0.0))).value - target);
      if (prev > 0.0) {
        ok = ok && std::abs(prev / err - 4.0) <= 0.5;
        detail += fmt(" %.4f", prev / err);
      }
      prev = err;
    }
    detail += "; ";
  }
  return {ok, detail};
}

Outcome c14_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("vortex_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = VORTEX_CLI_PATH;
  write_text_file((dir / "p.json").string(), to_json(balanced_params(0.3)).dump());
  auto run = [&](const std::string& tag) {
    const std::string d = dir.string() + "/";
    const std::string cmds[] = {
        cli + " --seed 42 profile --params " + d + "p.json --radius 40 --cells 4096 --corrected-bc --out " + d + tag + "_prof.csv",
        cli + " --seed 42 spectrum --profile " + d + tag + "_prof.csv --blocks 4 --eigvec " + d + tag + "_ev.csv --out " + d + tag + "_spec.csv",
        cli + " --seed 42 stability --params " + d + "p.json --b-sweep 0.1:0.3:0.1 --cells 1024 --out " + d + tag +
            "_diag.csv --trace " + d + tag + "_trace.csv",
    };
    for (const auto& c : cmds)
      if (std::system((c + " > /dev/null").c_str()) != 0) return false;
    return true;
  };
  if (!run("a") || !run("b")) {
    fs::remove_all(dir);
    return {false, "CLI run failed"};
  }
  bool same = true, paired = true;
  int files = 0;
  for (const char* name : {"prof", "ev", "spec", "diag", "trace"}) {
    const std::string a = (dir / (std::string("a_") + name + ".csv")).string();
    const std::string b = (dir / (std::string("b_") + name + ".csv")).string();
    same = same && read_text_file(a) == read_text_file(b);
    paired = paired && verify_artifact(a, meta_path_for(a)).ok;
    ++files;
  }
  // a CSV paired with another run's metadata must be rejected
  const bool rejects = !verify_artifact((dir / "a_spec.csv").string(), (dir / "a_ev.meta.json").string()).ok;
  fs::remove_all(dir);
  return {same && paired && rejects, std::to_string(files) + " CSVs " + (same ? "byte-identical" : "DIFFER") +
                                         (paired ? ", metadata hashes match" : ", metadata mismatch") +
                                         (rejects ? ", mismatched pair rejected" : ", mismatched pair ACCEPTED")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"decoupled profile vs scalar GL oracle", c1_decoupled_profile},
      {"balanced reduction", c2_balanced_reduction},
      {"tail asymptotics", c3_asymptotics},
      {"second-variation finite differences", c4_fd_oracle},
      {"block decomposition exactness", c5_block_decomposition},
      {"mu0 positive", c6_mu0_positive},
      {"mu1 positive for B < 0", c7_mu1_positive_for_negative_b},
      {"instability threshold for B = 0.3", c8_threshold},
      {"instability witness", c9_witness},
      {"complex and real n = 1 blocks, simplicity, ordering", c10_l1_m1},
      {"blockwise minimum vs dense polar operator", c11_crosscheck},
      {"sup bound", c12_sup_bound},
      {"Bessel oracles", c13_bessel},
      {"CLI determinism", c14_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  const bool residual_ok = worst_eigen_residual <= 1e-8;
  std::printf("%s eigen-residual contract: worst |Kv - mu Mv| / |Mv| = %.2e\n", residual_ok ? "PASS" : "FAIL",
              worst_eigen_residual);
  if (!residual_ok) ++failed;
  return failed == 0 ? 0 : 1;
}
