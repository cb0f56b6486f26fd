#include "vortex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

double RadialGrid::integrate(std::span<const double> g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * g[i];
  return s;
}

RadialGrid make_grid(double radius, std::size_t n_cells) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("grid radius must be positive");
  if (n_cells < kMinCells) {
    std::ostringstream msg;
    msg << "grid needs at least " << kMinCells << " cells, got " << n_cells;
    throw InvalidArgument(msg.str());
  }
  RadialGrid g;
  g.radius_ = radius;
  g.h_ = radius / static_cast<double>(n_cells);
  g.nodes_.resize(n_cells);
  g.weights_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    g.nodes_[i] = (static_cast<double>(i) + 0.5) * g.h_;
    g.weights_[i] = g.nodes_[i] * g.h_;
  }
  return g;
}

double BlockOperator::form(std::span<const double> v) const {
  return form_scale * stiffness.quadratic_form(v);
}

double BlockOperator::mass_form(std::span<const double> v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) s += mass[i] * v[i] * v[i];
  return form_scale * s;
}

std::vector<double> BlockOperator::component(std::span<const double> v, std::size_t comp) const {
  const std::size_t n = grid.n_cells();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v[index(i, comp)];
  return out;
}

void BlockOperator::set_component(std::span<double> v, std::size_t comp,
                                  std::span<const double> values) const {
  for (std::size_t i = 0; i < grid.n_cells(); ++i) v[index(i, comp)] = values[i];
}

void add_radial_stiffness(SymmetricBand& k, const RadialGrid& grid, std::size_t n_components,
                          std::size_t comp, int m, double factor) {
  const std::size_t n = grid.n_cells();
  // Flux form of -(1/r)(r u')': face j between cells j-1 and j carries r_j / h = j.
  for (std::size_t j = 1; j < n; ++j) {
    const double c = factor * static_cast<double>(j);
    const std::size_t a = (j - 1) * n_components + comp;
    const std::size_t b = j * n_components + comp;
    k.add(a, a, c);
    k.add(b, b, c);
    k.add(a, b, -c);
  }
  // Rim face: u(R) = 0 reached over the half cell, R / (h/2) = 2n.
  k.add((n - 1) * n_components + comp, (n - 1) * n_components + comp,
        factor * 2.0 * static_cast<double>(n));
  if (m != 0) {
    const double m2 = static_cast<double>(m) * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.node(i);
      k.add(i * n_components + comp, i * n_components + comp, factor * m2 * grid.weight(i) / (r * r));
    }
  }
}

double radial_form(const RadialGrid& grid, int m, std::span<const double> u) {
  const std::size_t n = grid.n_cells();
  double s = 0.0;
  for (std::size_t j = 1; j < n; ++j) s += static_cast<double>(j) * (u[j] - u[j - 1]) * (u[j] - u[j - 1]);
  s += 2.0 * static_cast<double>(n) * u[n - 1] * u[n - 1];
  if (m != 0) {
    const double m2 = static_cast<double>(m) * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.node(i);
      s += m2 * grid.weight(i) / (r * r) * u[i] * u[i];
    }
  }
  return s;
}

BlockOperator make_block(const RadialGrid& grid, std::span<const int> modes, double form_scale) {
  BlockOperator op;
  op.grid = grid;
  op.n_components = modes.size();
  op.component_modes.assign(modes.begin(), modes.end());
  op.form_scale = form_scale;
  const std::size_t dim = grid.n_cells() * op.n_components;
  op.stiffness = SymmetricBand(dim, op.n_components);
  op.mass.resize(dim);
  for (std::size_t i = 0; i < grid.n_cells(); ++i)
    for (std::size_t c = 0; c < op.n_components; ++c) op.mass[op.index(i, c)] = grid.weight(i);
  for (std::size_t c = 0; c < op.n_components; ++c)
    add_radial_stiffness(op.stiffness, grid, op.n_components, c, modes[c]);
  return op;
}

BlockOperator scalar_radial_operator(const RadialGrid& grid, int m, std::span<const double> potential) {
  if (potential.size() != grid.n_cells()) throw InvalidArgument("potential length does not match grid");
  if (m < 0) throw InvalidArgument("angular index must be nonnegative");
  const int modes[] = {m};
  auto op = make_block(grid, modes);
  for (std::size_t i = 0; i < grid.n_cells(); ++i) op.stiffness.add(i, i, grid.weight(i) * potential[i]);
  return op;
}

double gershgorin_lower_bound(const SymmetricBand& k, std::span<const double> mass) {
  const std::size_t n = k.size();
  const std::size_t bw = k.bandwidth();
  std::vector<double> radius(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t last = std::min(n - 1, j + bw);
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double c = std::abs(k(i, j)) / std::sqrt(mass[i] * mass[j]);
      radius[i] += c;
      radius[j] += c;
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, k(i, i) / mass[i] - radius[i]);
  return lo;
}

std::size_t eigenvalues_below(const SymmetricBand& k, std::span<const double> mass, double shift) {
  BandLDLT f;
  if (!f.factor(k, mass, shift)) throw SolverError("singular factorization at shift", shift);
  return f.negative_pivots();
}

void normalize_sign(std::span<double> v) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-12 * vmax) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

namespace {

double mass_dot(std::span<const double> mass, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) s += mass[i] * x[i] * y[i];
  return s;
}

void deflate(std::span<double> x, std::span<const double> mass, std::span<const Eigenpair> known) {
  for (const auto& e : known) {
    const double c = mass_dot(mass, e.vector, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * e.vector[i];
  }
}

void mass_normalize(std::span<double> x, std::span<const double> mass) {
  const double nrm = std::sqrt(mass_dot(mass, x, x));
  for (double& v : x) v /= nrm;
}

struct Residuals {
  double mass_norm;  // |K x - rho M x|_{M^-1}
  double relative;   // |K x - rho M x|_2 / |M x|_2
};

Residuals residual_norms(const SymmetricBand& k, std::span<const double> mass, std::span<const double> x,
                         double rho) {
  const auto kx = k.multiply(x);
  double s = 0.0, plain = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = kx[i] - rho * mass[i] * x[i];
    s += r * r / mass[i];
    plain += r * r;
    mx += mass[i] * mass[i] * x[i] * x[i];
  }
  return {std::sqrt(s), std::sqrt(plain / mx)};
}

Eigenpair deflated_inverse_iteration(const SymmetricBand& k, std::span<const double> mass,
                                     std::span<const Eigenpair> known, double shift_hint,
                                     const EigenOptions& opts) {
  const std::size_t n = k.size();
  const std::size_t allowed = known.size();  // negatives allowed below a certified shift
  if (mass.size() != n) throw InvalidArgument("mass length does not match stiffness");
  for (double m : mass)
    if (!(m > 0.0)) throw InvalidArgument("mass entries must be positive");

  Eigenpair out;
  BandLDLT factor_lo;
  auto certified = [&](double shift, BandLDLT& f) {
    ++out.factorizations;
    return f.factor(k, mass, shift) && f.negative_pivots() <= allowed;
  };

  double lo;
  if (known.empty()) {
    lo = gershgorin_lower_bound(k, mass);
    lo -= 1e-9 * (1.0 + std::abs(lo));
  } else {
    lo = known.back().lower_bound;
  }
  double hi = std::numeric_limits<double>::infinity();
  for (int guard = 0; !certified(lo, factor_lo); ++guard) {
    if (guard > 60) throw SolverError("could not certify an initial shift", lo);
    lo -= 1.0 + std::abs(lo);
  }
  if (std::isfinite(shift_hint) && shift_hint > lo) {
    BandLDLT f;
    if (certified(shift_hint, f)) {
      lo = shift_hint;
      factor_lo = std::move(f);
    } else {
      hi = shift_hint;
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-0.5, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  deflate(x, mass, known);
  mass_normalize(x, mass);
  double rho = k.quadratic_form(x);
  double rho_prev = std::numeric_limits<double>::infinity();
  double step_prev = std::numeric_limits<double>::infinity();
  double res = std::numeric_limits<double>::infinity();
  hi = std::min(hi, rho);

  std::vector<double> y(n);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) y[i] = mass[i] * x[i];
    factor_lo.solve(y);
    deflate(y, mass, known);
    mass_normalize(y, mass);
    x.swap(y);
    rho_prev = rho;
    rho = k.quadratic_form(x);
    const auto norms = residual_norms(k, mass, x, rho);
    res = norms.mass_norm;
    out.iterations = it;
    hi = std::min(hi, rho + res);

    const double step = std::abs(rho - rho_prev);
    const double scale = 1.0 + std::abs(rho);
    if (step < opts.tol * scale && res <= opts.residual_tol && norms.relative <= opts.residual_tol) {
      // The eigenvalue near rho must be the next one: nothing else may hide below.
      const double margin = std::max(2.0 * res, opts.tol * scale);
      BandLDLT f;
      if (certified(rho - margin, f)) {
        out.value = rho;
        out.vector = std::move(x);
        out.residual = res;
        out.relative_residual = norms.relative;
        out.lower_bound = std::max(lo, rho - margin);
        normalize_sign(out.vector);
        return out;
      }
      hi = std::min(hi, rho - margin);
    }

    // Slow contraction: move the shift closer to the target eigenvalue.
    const bool slow = !(step < 0.1 * step_prev) || it == 1;
    step_prev = step;
    if (slow && hi > lo) {
      double cand = rho - 2.0 * res;
      if (!(cand > lo && cand < hi)) cand = lo + 0.5 * (hi - lo);
      BandLDLT f;
      if (certified(cand, f)) {
        lo = cand;
        factor_lo = std::move(f);
      } else {
        hi = cand;
        const double mid = lo + 0.5 * (hi - lo);
        BandLDLT g;
        if (certified(mid, g)) {
          lo = mid;
          factor_lo = std::move(g);
        } else {
          hi = mid;
        }
      }
    }
  }
  std::ostringstream state;
  state << "iterations=" << out.iterations << " rho=" << rho << " bracket=[" << lo << ", " << hi << "]";
  throw SolverError("inverse iteration did not converge", res, state.str());
}

}  // namespace

Eigenpair ground_eigenpair(const SymmetricBand& k, std::span<const double> mass, double shift_hint,
                           const EigenOptions& opts) {
  return deflated_inverse_iteration(k, mass, {}, shift_hint, opts);
}

Eigenpair ground_eigenpair(const BlockOperator& op, double shift_hint, const EigenOptions& opts) {
  return ground_eigenpair(op.stiffness, op.mass, shift_hint, opts);
}

Eigenpair next_eigenpair(const SymmetricBand& k, std::span<const double> mass,
                         std::span<const Eigenpair> known, const EigenOptions& opts) {
  return deflated_inverse_iteration(k, mass, known, std::numeric_limits<double>::quiet_NaN(), opts);
}

}  // namespace vortex
