#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "vortex/grid.hpp"
#include "vortex/profile.hpp"

namespace vortex {

/// Real radial functions of the n = 1 block: a0 (mode 0) and a2 (mode 2) per component.
struct SpectralVector {
  std::vector<double> a0_plus;
  std::vector<double> a0_minus;
  std::vector<double> a2_plus;
  std::vector<double> a2_minus;
};

/// Component order of assemble_M1: a0+, a0-, a2+, a2-.
SpectralVector split_m1_vector(const BlockOperator& m1, std::span<const double> v);
std::vector<double> pack_m1_vector(const BlockOperator& m1, const SpectralVector& s);

struct ScalarPair {
  BlockOperator plus;
  BlockOperator minus;
};

/// The two mode-1 scalar operators with potentials V+ and V- (imaginary part of b1).
ScalarPair assemble_Q0(const Profile& prof, double lambda);

/// Whole n = 0 block acting on complex b1: components Re b1+, Re b1-, Im b1+, Im b1-.
/// The real parts carry the extra coupling 2 lambda [A+ f+^2 x+^2 + A- f-^2 x-^2 + 2B f+ f- x+ x-].
BlockOperator assemble_Q0_full(const Profile& prof, double lambda);

/// Real four-component form Q^(1) on (a0+, a0-, a2+, a2-).
BlockOperator assemble_M1(const Profile& prof, double lambda);

/// Block pairing the complex modes p = 1 + n and q = 1 - n (n >= 1), eight real
/// components Re bp+, Re bp-, Im bp+, Im bp-, Re bq+, Re bq-, Im bq+, Im bq-.
BlockOperator assemble_pair_block(const Profile& prof, double lambda, int n);

/// n >= 2 blocks; throws InvalidArgument for n < 2.
BlockOperator assemble_Qn(const Profile& prof, double lambda, int n);

/// Complex n = 1 operator acting on (b2, b0) in the real representation of assemble_pair_block.
BlockOperator assemble_L1_complex(const Profile& prof, double lambda);

/// Embeds (xi a0, -conj(xi) a2) into the real representation of assemble_L1_complex.
std::vector<double> l1_lift(const BlockOperator& l1, const SpectralVector& s, std::complex<double> xi);

inline constexpr int kDefaultMaxBlock = 16;

struct MuReport {
  double mu0_plus = 0.0;
  double mu0_minus = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
  double mu = 0.0;
  Eigenpair m1_ground;
  double residual = 0.0;  // largest eigen-residual among the three solves
};

MuReport mu_min(const Profile& prof, double lambda, const EigenOptions& opts = {});

struct BlockSpectrum {
  std::string block_id;  // "n0", "n1" or "n<k>"
  int n = 0;
  double mu = 0.0;
  double second = 0.0;
  double gap = 0.0;
  bool simple = false;
  double residual = 0.0;
};

/// Ground eigenvalues of the n = 0 block (full), M^(1) and Q^(n) for n = 2..n_max,
/// each with the gap to its second eigenvalue.
std::vector<BlockSpectrum> block_spectra(const Profile& prof, double lambda, int n_max,
                                         const EigenOptions& opts = {});

/// Number of generalized eigenvalues in [mu - delta, mu + delta], counted by inertia.
std::size_t multiplicity(const BlockOperator& op, double mu, double delta);

struct SimplicityReport {
  double mu = 0.0;
  double second = 0.0;
  double gap = 0.0;
  bool simple = false;
  bool ordered = false;       // 0 <= s a2 <= s a0 + 1e-8 per component sign s
  double worst_violation = 0.0;
  int sign_plus = 1;
  int sign_minus = 1;
  SpectralVector vector;      // sign-normalized ground state
  std::string note;

  bool ok() const noexcept { return simple && ordered; }
};

/// Gap to the second eigenvalue of M^(1) and the ordering 0 <= a2 <= a0 of the ground state.
SimplicityReport simplicity_and_sign(const BlockOperator& m1, const Eigenpair& ground,
                                     const EigenOptions& opts = {});

struct FKVector {
  std::vector<double> f_plus;
  std::vector<double> f_minus;
  std::vector<double> k_plus;
  std::vector<double> k_minus;
};

/// F = (a0 + a2) / 2, K = (a0 - a2) / 2 and back.
FKVector fk_transform(const SpectralVector& v);
SpectralVector fk_inverse(const FKVector& v);

/// Q^(1) evaluated in the F/K variables (gradient, 2/r^2 |F - K|^2 and the 8 lambda K-coupling).
double q1_fk_form(const Profile& prof, double lambda, const FKVector& v);

struct TildeReport {
  double sup_f_plus = 0.0;
  double sup_f_minus = 0.0;
  double sup_k_plus = 0.0;
  double sup_k_minus = 0.0;
  double sup = 0.0;
  double raw_sup = 0.0;  // without the r^2 factor
};

/// Residual of the homogeneous F/K system, multiplied by r^2, evaluated on
/// F = f / r, K = f' with central differences over interior nodes.
TildeReport tilde_solution_check(const Profile& prof);

/// eta(x) = 1 on [0, 1/2], 0 for x >= 1, cubic smoothstep in between.
double cubic_cutoff(double x);

struct InstabilityWitness {
  double q_breve = 0.0;          // 2 pi v^T K v for the cut-off direction
  double mass = 0.0;             // sum of the squared L2 norms
  double rayleigh = 0.0;         // q_breve / (2 pi mass)
  double limit_integral = 0.0;   // -8 pi B int f+ f- f+' f-' r dr
  SpectralVector direction;
};

/// Direction a0 = (L + P) eta / 2, a2 = (L - P) eta / 2 with L+ = f+/r, L- = -f-/r,
/// P+ = f+', P- = -f-', cut off at radius cutoff_r.
InstabilityWitness instability_direction(const Profile& prof, double cutoff_r);

}  // namespace vortex
