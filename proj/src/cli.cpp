#include "vortex/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vortex/error.hpp"
#include "vortex/io.hpp"
#include "vortex/stability.hpp"

namespace vortex {

namespace {

struct ParamSource {
  std::string params_path;
  std::string bec_path;
};

struct ResolvedParams {
  GLParams params;
  std::optional<BECParams> bec;
  std::optional<double> bec_lambda;
};

void add_param_options(CLI::App* cmd, ParamSource& src) {
  auto* p = cmd->add_option("--params", src.params_path, "GL parameter JSON (a_plus, a_minus, b, t_plus, t_minus)");
  auto* b = cmd->add_option("--bec", src.bec_path, "condensate parameter JSON, mapped to GL form");
  p->excludes(b);
  b->excludes(p);
}

ResolvedParams resolve(const ParamSource& src) {
  ResolvedParams r;
  if (!src.bec_path.empty()) {
    r.bec = bec_from_json(load_json_file(src.bec_path));
    const auto m = bec_to_gl(*r.bec);
    r.params = m.params;
    r.bec_lambda = m.lambda;
  } else if (!src.params_path.empty()) {
    r.params = params_from_json(load_json_file(src.params_path));
  } else {
    throw InvalidArgument("one of --params or --bec is required");
  }
  const auto check = validate_params(r.params);
  if (!check) throw InvalidArgument("parameters violate " + check.violation);
  return r;
}

json params_block(const ResolvedParams& r) {
  json j{{"params", to_json(r.params)}};
  if (r.bec) {
    j["bec"] = to_json(*r.bec);
    j["bec_lambda"] = *r.bec_lambda;
  }
  return j;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(name) + " must be positive");
}

std::string seed_string(std::uint64_t seed) { return std::to_string(seed); }

json profile_meta(const Profile& prof) {
  return {{"params", to_json(prof.params)},
          {"lambda", prof.lambda},
          {"radius", prof.grid.radius()},
          {"n_cells", prof.grid.n_cells()},
          {"boundary_plus", prof.boundary_plus},
          {"boundary_minus", prof.boundary_minus},
          {"radius_is_rescaled", prof.radius_is_rescaled}};
}

struct ProfileArgs {
  ParamSource src;
  double radius = 1.0;
  std::size_t cells = 2048;
  std::optional<double> lambda;
  bool entire = false;
  bool corrected_bc = false;
  double tol = 1e-9;
  std::string out;
};

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
  const ResolvedParams rp = resolve(a.src);
  require_positive(a.radius, "--radius");
  require_positive(a.tol, "--tol");
  const bool entire = a.entire || a.corrected_bc;
  if (entire && a.lambda) throw InvalidArgument("--lambda does not apply to the entire-solution frame (lambda = 1)");
  double lambda = a.lambda.value_or(rp.bec_lambda.value_or(1.0));
  if (entire) lambda = 1.0;
  require_positive(lambda, "--lambda");

  json config = params_block(rp);
  config["command"] = "profile";
  config["radius"] = a.radius;
  config["n_cells"] = a.cells;
  config["lambda"] = lambda;
  config["entire"] = entire;
  config["corrected_bc"] = a.corrected_bc;
  config["tol"] = a.tol;

  ProfileSolve s;
  if (entire) {
    s.profile = entire_solution_approx(rp.params, a.radius, a.cells, a.corrected_bc);
  } else {
    ProfileOptions o;
    o.lambda = lambda;
    o.tol = a.tol;
    s = solve_profile_report(rp.params, a.radius, a.cells, o);
  }
  const Profile& prof = s.profile;
  const auto res = profile_residual(prof);
  json extra{{"profile", profile_meta(prof)},
             {"residual_plus", res.sup_plus},
             {"residual_minus", res.sup_minus},
             {"energy", energy(prof, prof.lambda)}};
  if (!entire) {
    extra["newton_iterations"] = s.newton_iterations;
    extra["continuation_stages"] = s.continuation_stages;
  }
  write_artifact(a.out, profile_table(prof), config, extra);
  out << json{{"out", a.out}, {"config_hash", config_hash(config)}, {"residual_plus", res.sup_plus},
              {"residual_minus", res.sup_minus}}.dump()
      << "\n";
  return 0;
}

struct SpectrumArgs {
  ParamSource src;
  std::string profile;
  std::optional<double> lambda;
  double radius = 1.0;
  std::size_t cells = 1024;
  int blocks = 1;
  std::string eigvec;
  bool check_l1 = false;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a, const EigenOptions& eo, std::ostream& out) {
  if (a.blocks < 1 || a.blocks > kDefaultMaxBlock)
    throw InvalidArgument("--blocks must lie in [1, " + std::to_string(kDefaultMaxBlock) + "]");
  json config{{"command", "spectrum"}, {"blocks", a.blocks}, {"seed", seed_string(eo.seed)}};
  Profile prof;
  if (!a.profile.empty()) {
    if (!a.src.params_path.empty() || !a.src.bec_path.empty() || a.lambda)
      throw InvalidArgument("--profile carries its own parameters and lambda");
    prof = load_profile(a.profile);
    config["profile_config_hash"] = load_json_file(meta_path_for(a.profile))["config_hash"];
  } else {
    const ResolvedParams rp = resolve(a.src);
    require_positive(a.radius, "--radius");
    const double lambda = a.lambda.value_or(rp.bec_lambda.value_or(1.0));
    require_positive(lambda, "--lambda");
    config.update(params_block(rp));
    config["radius"] = a.radius;
    config["n_cells"] = a.cells;
    config["lambda"] = lambda;
    ProfileOptions o;
    o.lambda = lambda;
    prof = solve_profile(rp.params, a.radius, a.cells, o);
  }
  const double lambda = prof.lambda;

  const auto blocks = block_spectra(prof, lambda, a.blocks, eo);
  CsvTable t{{"block_id", "mu", "simple", "gap"}, {}};
  for (const auto& b : blocks)
    t.rows.push_back({b.block_id, format_double(b.mu), b.simple ? "true" : "false", format_double(b.gap)});
  const auto argmin = std::min_element(blocks.begin(), blocks.end(),
                                       [](const auto& x, const auto& y) { return x.mu < y.mu; });

  json summary{{"lambda", lambda}, {"mu0", blocks[0].mu}, {"mu1", blocks[1].mu},
               {"mu", std::min(blocks[0].mu, blocks[1].mu)}, {"argmin_block", argmin->block_id}};
  bool ok = true;

  if (!a.eigvec.empty() || a.check_l1) {
    const auto m1 = assemble_M1(prof, lambda);
    const auto ground = ground_eigenpair(m1, std::nan(""), eo);
    if (!a.eigvec.empty()) {
      const auto sr = simplicity_and_sign(m1, ground, eo);
      json vconfig = config;
      vconfig["artifact"] = "eigvec";
      write_artifact(a.eigvec, eigenvector_table(prof.grid, sr.vector), vconfig,
                     {{"mu1", sr.mu}, {"gap", sr.gap}, {"simple", sr.simple}, {"ordered", sr.ordered},
                      {"sign_plus", sr.sign_plus}, {"sign_minus", sr.sign_minus}});
      summary["eigvec"] = a.eigvec;
    }
    if (a.check_l1) {
      const auto l1 = assemble_L1_complex(prof, lambda);
      const auto lg = ground_eigenpair(l1, std::nan(""), eo);
      const double diff = std::abs(lg.value - ground.value);
      const std::size_t mult = multiplicity(l1, lg.value, 1e-8 * (1.0 + std::abs(lg.value)));
      const bool pass = diff <= 1e-9 * std::max(1.0, std::abs(ground.value));
      summary["l1_check"] = {{"l1_ground", lg.value}, {"m1_ground", ground.value}, {"difference", diff},
                             {"l1_multiplicity", mult}, {"pass", pass}};
      ok = ok && pass;
    }
  }
  if (!a.out.empty()) {
    write_artifact(a.out, t, config, {{"summary", summary}});
    summary["out"] = a.out;
  } else {
    out << t.str();
  }
  out << summary.dump() << "\n";
  return ok ? 0 : 1;
}

struct StabilityArgs {
  ParamSource src;
  std::optional<double> lambda;
  std::string b_sweep;
  double lambda_max = 1e4;
  double rel_tol = 1e-3;
  std::size_t cells = 2048;
  std::string out;
  std::string trace;
  std::string summary;
};

int cmd_stability(const StabilityArgs& a, const EigenOptions& eo, std::ostream& out) {
  const ResolvedParams rp = resolve(a.src);
  StabilityOptions so;
  so.n_cells = a.cells;
  so.eigen = eo;

  if (a.b_sweep.empty()) {
    const double lambda = a.lambda.value_or(rp.bec_lambda.value_or(0.0));
    if (!a.lambda && !rp.bec_lambda) throw InvalidArgument("give --lambda or --b-sweep");
    require_positive(lambda, "--lambda");
    const auto rep = classify(rp.params, lambda, so);
    out << "lambda=" << format_double(lambda) << " mu0=" << format_double(rep.mu0) << " mu1=" << format_double(rep.mu1)
        << " mu=" << format_double(std::min(rep.mu0, rep.mu1)) << " classification=" << to_string(rep.classification)
        << "\n";
    return 0;
  }

  if (a.lambda) throw InvalidArgument("--lambda and --b-sweep are exclusive");
  if (a.out.empty()) throw InvalidArgument("--b-sweep needs --out");
  require_positive(a.lambda_max, "--lambda-max");
  require_positive(a.rel_tol, "--rel-tol");
  const auto bs = parse_range(a.b_sweep);

  json config = params_block(rp);
  config["command"] = "stability";
  config["b_values"] = bs;
  config["lambda_max"] = a.lambda_max;
  config["rel_tol"] = a.rel_tol;
  config["n_cells"] = a.cells;
  config["seed"] = seed_string(eo.seed);

  const auto results = sweep_b(rp.params, bs, a.lambda_max, a.rel_tol, so);

  CsvTable diagram{{"b", "lambda_star", "status", "n_bisections"}, {}};
  CsvTable trace{{"b", "lambda", "mu0", "mu1"}, {}};
  json per_b = json::array();
  for (const auto& r : results) {
    const bool detected = r.status == ThresholdStatus::detected;
    diagram.rows.push_back({format_double(r.b), detected ? format_double(r.lambda_star) : "nan", to_string(r.status),
                            std::to_string(r.n_bisections)});
    for (const auto& s : r.trace)
      trace.rows.push_back({format_double(r.b), format_double(s.lambda), format_double(s.mu0), format_double(s.mu1)});
    json sc = json::array();
    for (const auto& [lo, hi] : r.sign_changes) sc.push_back({lo, hi});
    json entry{{"b", r.b}, {"status", to_string(r.status)}, {"n_bisections", r.n_bisections},
               {"sign_changes", sc}, {"message", r.message}};
    if (detected) {
      entry["lambda_star"] = r.lambda_star;
      entry["bracket"] = {r.bracket.first, r.bracket.second};
    }
    per_b.push_back(entry);
    out << "b=" << format_double(r.b) << " status=" << to_string(r.status);
    if (detected) out << " lambda_star=" << format_double(r.lambda_star);
    out << "\n";
  }
  write_artifact(a.out, diagram, config, {{"artifact", "diagram"}});
  if (!a.trace.empty()) {
    json tconfig = config;
    tconfig["artifact"] = "trace";
    write_artifact(a.trace, trace, tconfig);
  }
  if (!a.summary.empty())
    write_text_file(a.summary,
                    json{{"config", config}, {"config_hash", config_hash(config)}, {"results", per_b}}.dump(2) + "\n");
  return 0;
}

int cmd_bec_map(const std::string& path, std::ostream& out) {
  const BECParams b = bec_from_json(load_json_file(path));
  const auto m = bec_to_gl(b);
  const auto check = validate_params(m.params);
  out << json{{"lambda", m.lambda}, {"params", to_json(m.params)}, {"valid", check.ok}}.dump() << "\n";
  return 0;
}

void error_json(std::ostream& err, json j) { err << j.dump() << "\n"; }

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw InvalidArgument("range must look like a:b:step");
  double a = 0.0, b = 0.0, step = 0.0;
  try {
    a = std::stod(spec.substr(0, c1));
    b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("range must look like a:b:step");
  }
  if (!(step > 0.0) || b < a) throw InvalidArgument("range needs step > 0 and a <= b");
  const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  if (n > 100000) throw InvalidArgument("range has too many entries");
  std::vector<double> v;
  for (long k = 0; k <= n; ++k) {
    // strip the a + k * step rounding noise so 0.1:0.3:0.1 prints as 0.3
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", a + static_cast<double>(k) * step);
    v.push_back(std::strtod(buf, nullptr));
  }
  return v;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant two-component Ginzburg-Landau vortices: profiles, spectra, stability"};
  app.require_subcommand(1);
  std::uint64_t seed = EigenOptions{}.seed;
  app.add_option("--seed", seed, "seed for the eigensolver start vectors");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "solve the radial profile and write CSV + metadata");
  add_param_options(profile, pa.src);
  profile->add_option("--radius", pa.radius, "disk radius")->capture_default_str();
  profile->add_option("--cells", pa.cells, "radial cells")->capture_default_str();
  profile->add_option("--lambda", pa.lambda, "GL parameter (default 1, or the BEC mapping)");
  profile->add_flag("--entire", pa.entire, "lambda = 1 frame on the radius-R disk");
  profile->add_flag("--corrected-bc", pa.corrected_bc, "entire frame with f(R) = t + a/R^2");
  profile->add_option("--tol", pa.tol, "scaled residual tolerance")->capture_default_str();
  profile->add_option("--out", pa.out, "profile CSV path")->required();

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Fourier-block ground eigenvalues");
  add_param_options(spectrum, sa.src);
  spectrum->add_option("--profile", sa.profile, "profile CSV written by `profile`");
  spectrum->add_option("--lambda", sa.lambda, "GL parameter");
  spectrum->add_option("--radius", sa.radius, "disk radius")->capture_default_str();
  spectrum->add_option("--cells", sa.cells, "radial cells")->capture_default_str();
  spectrum->add_option("--blocks", sa.blocks, "highest block index n")->capture_default_str();
  spectrum->add_option("--eigvec", sa.eigvec, "write the sign-normalized n = 1 ground state");
  spectrum->add_flag("--check-l1", sa.check_l1, "compare the complex n = 1 operator with the real one");
  spectrum->add_option("--out", sa.out, "spectrum CSV path (stdout when absent)");

  StabilityArgs ta;
  auto* stability = app.add_subcommand("stability", "classify one lambda or sweep B for lambda*");
  add_param_options(stability, ta.src);
  stability->add_option("--lambda", ta.lambda, "classify at this lambda");
  stability->add_option("--b-sweep", ta.b_sweep, "B values a:b:step");
  stability->add_option("--lambda-max", ta.lambda_max, "scan limit")->capture_default_str();
  stability->add_option("--rel-tol", ta.rel_tol, "bisection tolerance on lambda")->capture_default_str();
  stability->add_option("--cells", ta.cells, "unit-disk cells")->capture_default_str();
  stability->add_option("--out", ta.out, "diagram CSV path");
  stability->add_option("--trace", ta.trace, "mu1 trace CSV path");
  stability->add_option("--summary", ta.summary, "summary JSON path");

  std::string bec_path;
  auto* bec_map = app.add_subcommand("bec-map", "map condensate parameters to GL form");
  bec_map->add_option("--bec", bec_path, "condensate parameter JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  EigenOptions eo;
  eo.seed = seed;
  try {
    if (*profile) return cmd_profile(pa, out);
    if (*spectrum) return cmd_spectrum(sa, eo, out);
    if (*stability) return cmd_stability(ta, eo, out);
    if (*bec_map) return cmd_bec_map(bec_path, out);
  } catch (const FileNotFound& e) {
    error_json(err, {{"error", "file_not_found"}, {"path", e.path()}, {"message", e.what()}});
    return 2;
  } catch (const SolverError& e) {
    error_json(err, {{"error", "solver_failure"}, {"message", e.what()}, {"last_residual", e.last_residual()},
                     {"state", e.state()}});
    return 1;
  } catch (const InvalidArgument& e) {
    error_json(err, {{"error", "invalid_argument"}, {"message", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    error_json(err, {{"error", "failure"}, {"message", e.what()}});
    return 1;
  }
  return 1;
}

}  // namespace vortex
