#include "vortex/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "vortex/error.hpp"
#include "vortex/polar.hpp"

namespace vortex {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::stable: return "stable";
    case Classification::unstable: return "unstable";
    case Classification::marginal: return "marginal";
  }
  return "marginal";
}

std::string to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::detected: return "detected";
    case ThresholdStatus::not_detected: return "not detected";
    case ThresholdStatus::failed: return "failed";
  }
  return "failed";
}

Classification classify_value(double mu, double tol_margin) {
  if (mu > tol_margin) return Classification::stable;
  if (mu < -tol_margin) return Classification::unstable;
  return Classification::marginal;
}

namespace {

struct Evaluation {
  Profile profile;
  MuReport mu;
  double profile_residual = 0.0;
};

Evaluation evaluate(const GLParams& p, double lambda, const StabilityOptions& opts) {
  ProfileOptions po;
  po.lambda = lambda;
  Evaluation e;
  const auto solve = solve_profile_report(p, 1.0, opts.n_cells, po);
  e.profile = solve.profile;
  e.profile_residual = std::max(solve.residual_plus, solve.residual_minus);
  e.mu = mu_min(e.profile, lambda, opts.eigen);
  return e;
}

}  // namespace

StabilityReport classify(const GLParams& p, double lambda, const StabilityOptions& opts) {
  require_valid(p);
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const auto e = evaluate(p, lambda, opts);
  StabilityReport rep;
  rep.params = p;
  rep.lambda = lambda;
  rep.mu0 = e.mu.mu0;
  rep.mu1 = e.mu.mu1;
  rep.classification = classify_value(e.mu.mu, opts.tol_margin);
  rep.profile_residual = e.profile_residual;
  rep.eigen_residual = e.mu.residual;
  if (rep.classification == Classification::unstable) {
    const auto m1 = assemble_M1(e.profile, lambda);
    rep.ground_vector = split_m1_vector(m1, e.mu.m1_ground.vector);
  }
  return rep;
}

LambdaStarResult find_lambda_star(const GLParams& p, double lambda_max, double rel_tol, const StabilityOptions& opts) {
  require_valid(p);
  if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
  if (!(lambda_max > 0.0)) throw InvalidArgument("lambda_max must be positive");
  LambdaStarResult out;
  out.b = p.b;
  auto sample = [&](double lambda) {
    const auto e = evaluate(p, lambda, opts);
    Mu1Sample s{lambda, e.mu.mu0, e.mu.mu1};
    out.trace.push_back(s);
    return s;
  };
  try {
    const double lam0 = 0.5 * small_lambda_uniqueness_bound(p);
    for (double lam = lam0; lam <= lambda_max; lam *= 4.0) out.scan.push_back(sample(lam));
    if (out.scan.empty() || out.scan.back().lambda < lambda_max) out.scan.push_back(sample(lambda_max));

    for (std::size_t k = 0; k + 1 < out.scan.size(); ++k) {
      const double a = out.scan[k].mu1, b = out.scan[k + 1].mu1;
      if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0))
        out.sign_changes.emplace_back(out.scan[k].lambda, out.scan[k + 1].lambda);
    }
    if (!out.scan.empty() && out.scan.front().mu1 <= 0.0)
      out.message = "mu1 is not positive at the start of the scan";

    const auto first = std::find_if(out.scan.begin(), out.scan.end(), [](const Mu1Sample& s) { return s.mu1 < 0.0; });
    if (first == out.scan.end() || first == out.scan.begin() || (first - 1)->mu1 <= 0.0) {
      out.status = ThresholdStatus::not_detected;
      if (out.message.empty()) out.message = "no sign change of mu1 up to lambda_max";
      return out;
    }
    double lo = (first - 1)->lambda, hi = first->lambda;
    while (hi / lo - 1.0 > rel_tol) {
      const double mid = std::sqrt(lo * hi);
      const auto s = sample(mid);
      ++out.n_bisections;
      if (s.mu1 > 0.0) lo = mid;
      else hi = mid;
    }
    out.status = ThresholdStatus::detected;
    out.bracket = {lo, hi};
    out.lambda_star = std::sqrt(lo * hi);
    if (out.sign_changes.size() > 1) out.message = "multiple sign changes in the scan";
  } catch (const std::exception& e) {
    out.status = ThresholdStatus::failed;
    out.message = e.what();
  }
  return out;
}

std::size_t worker_count(std::size_t tasks) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VORTEX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) cap = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(cap, tasks));
}

std::vector<LambdaStarResult> sweep_b(const GLParams& base, const std::vector<double>& b_values, double lambda_max,
                                      double rel_tol, const StabilityOptions& opts) {
  std::vector<LambdaStarResult> out(b_values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < b_values.size(); k = next++) {
      GLParams p = base;
      p.b = b_values[k];
      if (auto check = validate_params(p); !check) {
        out[k].b = p.b;
        out[k].status = ThresholdStatus::failed;
        out[k].message = "invalid parameters: violates " + check.violation;
        continue;
      }
      try {
        out[k] = find_lambda_star(p, lambda_max, rel_tol, opts);
      } catch (const std::exception& e) {
        out[k].b = p.b;
        out[k].status = ThresholdStatus::failed;
        out[k].message = e.what();
      }
    }
  };
  const std::size_t workers = worker_count(b_values.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

CrosscheckReport muequal_crosscheck(const GLParams& p, double lambda, int n_max, int n_theta, std::size_t n_cells,
                                    const EigenOptions& opts) {
  require_valid(p);
  if (n_cells > 128) throw InvalidArgument("cross-check limited to n_cells <= 128");
  if (n_theta > 64) throw InvalidArgument("cross-check limited to n_theta <= 64");
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  ProfileOptions po;
  po.lambda = lambda;
  const Profile prof = solve_profile(p, 1.0, n_cells, po);

  CrosscheckReport rep;
  rep.blocks = block_spectra(prof, lambda, n_max, opts);
  rep.block_min = std::numeric_limits<double>::infinity();
  for (const auto& b : rep.blocks) {
    if (b.mu < rep.block_min) {
      rep.block_min = b.mu;
      rep.argmin_block = b.n;
    }
  }
  rep.min_at_low_block = rep.argmin_block == 0 || rep.argmin_block == 1;

  const auto polar = assemble_polar_operator(prof, lambda, n_theta);
  const auto g = ground_eigenpair(polar.stiffness, polar.mass, std::numeric_limits<double>::quiet_NaN(), opts);
  rep.polar_ground = g.value;
  rep.polar_residual = g.residual;
  rep.relative_difference = std::abs(g.value - rep.block_min) / std::max(std::abs(rep.block_min), 1e-300);
  rep.agree = rep.relative_difference <= 1e-8;
  return rep;
}

}  // namespace vortex
