#pragma once

namespace vortex {

/// Bessel function of the first kind J_n(x), integer order n >= 0.
/// Power series for J_0 and J_1, upward recurrence for higher orders.
/// Series cancellation limits this to moderate arguments (x <~ 10, absolute
/// error ~1e-14), enough for the first zeros of the low orders used here.
double bessel_j(int order, double x);

/// k-th positive zero (k >= 1) of J_n, located by scanning for a sign change
/// and refining by bisection to full double precision.
double bessel_j_zero(int order, int k);

/// First Dirichlet eigenvalue of -Laplace on the unit disk, j_{0,1}^2.
/// Computed once and cached.
double disk_dirichlet_eigenvalue();

}  // namespace vortex
