#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vortex/banded.hpp"

namespace vortex {

/// Cell-centered mesh on [0, R]: r_i = (i - 1/2) h, h = R / n_cells, with
/// weights w_i = r_i h so that sum_i w_i g(r_i) approximates int_0^R g(r) r dr.
/// No node sits at r = 0.
class RadialGrid {
 public:
  RadialGrid() = default;

  double radius() const noexcept { return radius_; }
  std::size_t n_cells() const noexcept { return nodes_.size(); }
  double h() const noexcept { return h_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  /// Radius of the face between cells i-1 and i (face 0 is the origin, face n the rim).
  double face(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

  /// Quadrature of int_0^R g r dr for nodal samples g.
  double integrate(std::span<const double> g) const;

  bool same_as(const RadialGrid& other) const noexcept {
    return radius_ == other.radius_ && nodes_.size() == other.nodes_.size();
  }

 private:
  friend RadialGrid make_grid(double radius, std::size_t n_cells);
  double radius_ = 0.0;
  double h_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kMinCells = 16;

/// Throws InvalidArgument unless radius > 0 and n_cells >= kMinCells.
RadialGrid make_grid(double radius, std::size_t n_cells);

/// Discrete carrier of a quadratic form q(v) = form_scale * v^T K v with mass
/// m(v) = form_scale * v^T M v, M diagonal. Unknowns are interleaved by node:
/// index(i, c) = i * n_components + c.
struct BlockOperator {
  RadialGrid grid;
  std::size_t n_components = 0;
  std::vector<int> component_modes;  // angular index per component (-1 when not radial-only)
  SymmetricBand stiffness;
  std::vector<double> mass;
  double form_scale = 1.0;

  std::size_t dim() const noexcept { return mass.size(); }
  std::size_t index(std::size_t node, std::size_t comp) const noexcept {
    return node * n_components + comp;
  }

  /// form_scale * v^T K v
  double form(std::span<const double> v) const;
  /// form_scale * v^T M v
  double mass_form(std::span<const double> v) const;

  std::vector<double> component(std::span<const double> v, std::size_t comp) const;
  void set_component(std::span<double> v, std::size_t comp, std::span<const double> values) const;
};

/// Empty block on `grid` with one component per entry of `modes`; each component
/// receives the radial stiffness of u -> int (|u'|^2 + m^2/r^2 |u|^2) r dr with
/// Dirichlet data at r = R (ghost value mirrors to zero on the rim face) and the
/// zero-flux closure at the origin face. Mass holds the weights per component.
BlockOperator make_block(const RadialGrid& grid, std::span<const int> modes, double form_scale = 1.0);

/// Adds the radial stiffness of angular index m to component `comp` of `k`.
void add_radial_stiffness(SymmetricBand& k, const RadialGrid& grid, std::size_t n_components,
                          std::size_t comp, int m, double factor = 1.0);

/// int (|u'|^2 + m^2/r^2 u^2) r dr for nodal values u with u(R) = 0, evaluated
/// face by face (same discretization as add_radial_stiffness).
double radial_form(const RadialGrid& grid, int m, std::span<const double> u);

/// One-component operator for -u'' - u'/r + m^2/r^2 u + V u with u(R) = 0.
BlockOperator scalar_radial_operator(const RadialGrid& grid, int m, std::span<const double> potential);

struct EigenOptions {
  double tol = 1e-10;           // successive Rayleigh quotients: |d mu| < tol (1 + |mu|)
  double residual_tol = 1e-8;   // bounds |K v - mu M v|_{M^-1} (|v|_M = 1) and |K v - mu M v| / |M v|
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  // mass-normalized, first significant entry positive
  double residual = 0.0;       // |K v - mu M v| in the M^-1 norm
  double relative_residual = 0.0;  // |K v - mu M v| / |M v| in the Euclidean norm
  double lower_bound = 0.0;    // certified: no eigenvalue of the deflated problem below it
  int iterations = 0;
  int factorizations = 0;
};

/// Lowest generalized eigenpair of K v = mu M v.
///
/// Shifted inverse iteration with banded LDL^T solves. The shift is kept
/// certified below the spectrum through the factorization inertia, tightened by
/// bisection and residual bounds, and convergence is certified the same way.
/// `shift_hint` is used as the starting shift when it lies below the spectrum,
/// otherwise as an upper bound. Throws SolverError on non-convergence.
Eigenpair ground_eigenpair(const BlockOperator& op, double shift_hint, const EigenOptions& opts = {});
Eigenpair ground_eigenpair(const SymmetricBand& k, std::span<const double> mass, double shift_hint,
                           const EigenOptions& opts = {});

/// Next eigenpair above `known` (mass-orthonormal eigenvectors of the lowest
/// eigenvalues) by inverse iteration deflated against `known`.
Eigenpair next_eigenpair(const SymmetricBand& k, std::span<const double> mass,
                         std::span<const Eigenpair> known, const EigenOptions& opts = {});

/// Number of generalized eigenvalues strictly below `shift` (factorization inertia).
std::size_t eigenvalues_below(const SymmetricBand& k, std::span<const double> mass, double shift);

/// Gershgorin lower bound for the spectrum of M^{-1/2} K M^{-1/2}.
double gershgorin_lower_bound(const SymmetricBand& k, std::span<const double> mass);

/// Sign convention: flips v so its first entry above 1e-12 max|v| is positive.
void normalize_sign(std::span<double> v);

}  // namespace vortex
