#include "vortex/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vortex/error.hpp"

namespace vortex {

SymmetricBand::SymmetricBand(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), data_(n * (bandwidth + 1), 0.0) {}

double SymmetricBand::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return data_[j * (bw_ + 1) + (i - j)];
}

void SymmetricBand::add(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  if (i >= n_ || i - j > bw_) throw InvalidArgument("SymmetricBand::add outside the band");
  data_[j * (bw_ + 1) + (i - j)] += v;
}

void SymmetricBand::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const double* col = &data_[j * (bw_ + 1)];
    y[j] += col[0] * x[j];
    const std::size_t last = std::min(n_ - 1, j + bw_);
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double a = col[i - j];
      y[i] += a * x[j];
      y[j] += a * x[i];
    }
  }
}

std::vector<double> SymmetricBand::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double SymmetricBand::quadratic_form(std::span<const double> x) const {
  return bilinear_form(x, x);
}

double SymmetricBand::bilinear_form(std::span<const double> x, std::span<const double> y) const {
  const auto ay = multiply(y);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * ay[i];
  return s;
}

void SymmetricBand::scale(double s) {
  for (double& v : data_) v *= s;
}

double SymmetricBand::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool BandLDLT::factor(const SymmetricBand& a, std::span<const double> mass, double shift) {
  n_ = a.n_;
  bw_ = a.bw_;
  l_ = a.data_;
  negative_ = 0;
  min_abs_pivot_ = std::numeric_limits<double>::infinity();
  const std::size_t ld = bw_ + 1;
  for (std::size_t j = 0; j < n_; ++j) l_[j * ld] -= shift * mass[j];

  // Right-looking: after column j is final, update the trailing band.
  for (std::size_t j = 0; j < n_; ++j) {
    double* col = &l_[j * ld];
    const double d = col[0];
    if (!std::isfinite(d) || d == 0.0) return false;
    if (d < 0.0) ++negative_;
    min_abs_pivot_ = std::min(min_abs_pivot_, std::abs(d));
    const std::size_t last = std::min(n_ - 1, j + bw_);
    for (std::size_t i = j + 1; i <= last; ++i) col[i - j] /= d;
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double lij_d = col[i - j] * d;
      if (lij_d == 0.0) continue;
      double* ci = &l_[i * ld];
      for (std::size_t k = i; k <= last; ++k) ci[k - i] -= col[k - j] * lij_d;
    }
  }
  return true;
}

void BandLDLT::solve(std::span<double> x) const {
  const std::size_t ld = bw_ + 1;
  for (std::size_t j = 0; j < n_; ++j) {
    const double* col = &l_[j * ld];
    const double xj = x[j];
    const std::size_t last = std::min(n_ - 1, j + bw_);
    for (std::size_t i = j + 1; i <= last; ++i) x[i] -= col[i - j] * xj;
  }
  for (std::size_t j = 0; j < n_; ++j) x[j] /= l_[j * ld];
  for (std::size_t j = n_; j-- > 0;) {
    const double* col = &l_[j * ld];
    const std::size_t last = std::min(n_ - 1, j + bw_);
    double s = x[j];
    for (std::size_t i = j + 1; i <= last; ++i) s -= col[i - j] * x[i];
    x[j] = s;
  }
}

}  // namespace vortex
