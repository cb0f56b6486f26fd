#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vortex {

/// Symmetric band matrix. Only the lower band is stored, column by column:
/// entry (i, j) with 0 <= i - j <= bandwidth sits at j * (bandwidth + 1) + (i - j).
class SymmetricBand {
 public:
  SymmetricBand() = default;
  SymmetricBand(std::size_t n, std::size_t bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  /// Zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;

  /// Adds v to entries (i, j) and (j, i); a diagonal entry receives v once.
  void add(std::size_t i, std::size_t j, double v);

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double bilinear_form(std::span<const double> x, std::span<const double> y) const;

  void scale(double s);

  /// Largest |a_ij| over the stored band.
  double max_abs() const;

 private:
  friend class BandLDLT;
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> data_;
};

/// LDL^T factorization without pivoting of A - shift * diag(mass).
///
/// By Sylvester's law of inertia the number of negative pivots equals the
/// number of generalized eigenvalues of (A, mass) below the shift, so a
/// factorization with no negative pivot certifies shift < lowest eigenvalue.
class BandLDLT {
 public:
  /// Returns false when a pivot is zero or non-finite; the object is then unusable.
  bool factor(const SymmetricBand& a, std::span<const double> mass, double shift);

  std::size_t negative_pivots() const noexcept { return negative_; }
  double min_abs_pivot() const noexcept { return min_abs_pivot_; }

  /// Solves (A - shift*mass) x = b in place.
  void solve(std::span<double> x) const;

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> l_;  // unit lower factor in band layout, diagonal slot holds d_j
  std::size_t negative_ = 0;
  double min_abs_pivot_ = 0.0;
};

}  // namespace vortex
