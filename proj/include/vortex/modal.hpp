#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "vortex/profile.hpp"

namespace vortex {

/// One angular Fourier mode b_n(r) e^{i n theta} of a perturbation, per component.
struct ModeCoeffs {
  int n = 0;
  std::vector<std::complex<double>> plus;
  std::vector<std::complex<double>> minus;
  std::complex<double> rim_plus{};   // value at r = R; admissible fields vanish there
  std::complex<double> rim_minus{};
};

/// Perturbation Phi = sum_n (b_n^+, b_n^-) e^{i n theta}; each n appears at most once.
struct TestField {
  std::vector<ModeCoeffs> modes;
};

/// Smooth random field on modes n_min..n_max vanishing at the rim.
TestField random_test_field(const RadialGrid& grid, int n_min, int n_max, std::uint64_t seed);

struct SecondVariationParts {
  double direct = 0.0;     // angular integrals done in closed form, mode by mode
  double blockwise = 0.0;  // sum of the Fourier-block forms Q^(n)
};

/// E''(Psi)[Phi] for the equivariant state in prof; returns the direct value.
/// Throws InvalidArgument when Phi does not vanish at r = R or does not match the grid.
double second_variation(const Profile& prof, double lambda, const TestField& phi);
SecondVariationParts second_variation_parts(const Profile& prof, double lambda, const TestField& phi);

/// Energy of Psi + eps Phi with the angular integral of the quartic term done
/// by an exact trapezoidal rule.
double field_energy(const Profile& prof, double lambda, const TestField& phi, double eps);

}  // namespace vortex
