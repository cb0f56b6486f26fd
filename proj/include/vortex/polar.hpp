#pragma once

#include <cstddef>
#include <vector>

#include "vortex/banded.hpp"
#include "vortex/profile.hpp"

namespace vortex {

/// Second variation of the full (non-equivariant) field on a polar grid:
/// the radial cells of the profile times n_theta equispaced angles, with the
/// angular derivative taken by trigonometric interpolation. Unknowns per
/// (node, angle) are Re phi+, Re phi-, Im phi+, Im phi-.
struct PolarOperator {
  RadialGrid grid;
  int n_theta = 0;
  SymmetricBand stiffness;
  std::vector<double> mass;

  std::size_t dim() const noexcept { return mass.size(); }
  std::size_t per_node() const noexcept { return 4 * static_cast<std::size_t>(n_theta); }
  std::size_t index(std::size_t node, int angle, std::size_t comp) const noexcept {
    return node * per_node() + static_cast<std::size_t>(angle) * 4 + comp;
  }
};

/// n_theta must be even and >= 4. Both forms are scaled so that eigenvalues are
/// directly comparable with the Fourier blocks.
PolarOperator assemble_polar_operator(const Profile& prof, double lambda, int n_theta);

/// Entries S_jl of the angular stiffness: sum_j,l u_j S_jl u_l / n_theta equals
/// the mean of |u_theta|^2 over the circle for trigonometric interpolants.
std::vector<double> angular_stiffness(int n_theta);

}  // namespace vortex
