#pragma once

// Gamma function and the delayed fractional matrix series used as
// closed-form references for the pure-delay linear system
//   D^alpha x(t) = A x(t-h) + (forcing),  x = 0 on [-h, 0].
//
// Every series is a finite sum: a term carrying the factor (t - k h)_+^p
// vanishes once k h >= t, so summation stops at k = floor(t/h). Terms are
// accumulated in ascending k so results are bitwise reproducible.

#include "fracpmp/core.hpp"

namespace fracpmp {

/// Euler gamma function for x > 0; InvalidArgument otherwise.
double gamma_fn(double x);

/// sum_k A^k (t - k h)_+^{alpha (k+1)} / Gamma(alpha (k+1) + 1) W
///
/// Solution at time t of D^alpha x = A x(t-h) + W with zero history.
Vec delayed_power_series(const Mat& A, const Vec& W, double alpha, double h, double t);

/// sum_k B^k (t - k h)_+^{alpha k} / Gamma(alpha k + 1)
///
/// Fundamental matrix of D^alpha X = B X(t-h) with X(0) = I, X = 0 on [-h, 0).
Mat x_alpha_pure_delay_series(const Mat& B, double alpha, double h, double t);

/// Control-response kernel G(tau) = sum_k A^k (tau - k h)_+^{alpha(k+1)-1} / Gamma(alpha(k+1)).
///
/// The forced response of the pure-delay system is int_0^t G(t-s) C u(s) ds.
/// G ~ tau^{alpha-1} near zero: tau == 0 throws SingularPoint, tau < 0
/// throws InvalidArgument.
Mat delay_control_kernel(const Mat& A, double alpha, double h, double tau);

/// Exact integral of G over [tau_lo, tau_hi] (0 <= tau_lo <= tau_hi), i.e.
/// the difference of the series antiderivative. This is the product
/// weight used instead of sampling G near its singularity.
Mat delay_control_kernel_integral(const Mat& A, double alpha, double h, double tau_lo,
                                  double tau_hi);

/// Forced response y(t_n) = int_0^{t_n} G(t_n - s) C u(s) ds on every node,
/// with u piecewise constant (u_j on [t_j, t_{j+1})) and G integrated
/// exactly cell by cell. Zero history.
Trajectory linear_pure_delay_response(const Mat& A, const Mat& C, const ControlSignal& u,
                                      double alpha, double h, const Grid& grid);

}  // namespace fracpmp
