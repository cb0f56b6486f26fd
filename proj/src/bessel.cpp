#include "vortex/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortex {
namespace {

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
double series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0) throw std::invalid_argument("bessel_j: negative order");
  if (order <= 1 || x == 0.0) return series(order, x);
  // Upward recurrence J_{n+1} = (2n/x) J_n - J_{n-1}; stable while n < x,
  // otherwise fall back to the series which converges fast there.
  if (order > x) return series(order, x);
  double jm = series(0, x);
  double j = series(1, x);
  for (int n = 1; n < order; ++n) {
    const double jp = (2.0 * n / x) * j - jm;
    jm = j;
    j = jp;
  }
  return j;
}

double bessel_j_zero(int order, int k) {
  if (order < 0 || k < 1) throw std::invalid_argument("bessel_j_zero: need order >= 0, k >= 1");
  const double step = 0.05;
  double a = order == 0 ? step : order * 1.0 + step;
  double fa = bessel_j(order, a);
  int found = 0;
  for (int i = 0; i < 100000; ++i) {
    const double b = a + step;
    const double fb = bessel_j(order, b);
    if (fa == 0.0 || fa * fb < 0.0) {
      if (++found == k) {
        double lo = a, hi = b, flo = fa;
        if (fa == 0.0) return a;
        while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
          const double mid = 0.5 * (lo + hi);
          const double fm = bessel_j(order, mid);
          if (fm == 0.0) return mid;
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw std::runtime_error("bessel_j_zero: zero not bracketed");
}

double disk_dirichlet_eigenvalue() {
  static const double value = [] {
    const double z = bessel_j_zero(0, 1);
    return z * z;
  }();
  return value;
}

}  // namespace vortex
