#pragma once

// Forward solver for the Caputo fractional delay equation
//
//   D^alpha y(t) = f(t, y(t), y(t-h), u(t)),   y = history on [-h, 0],
//
// through its equivalent Volterra form
//
//   y(t) = y(0) + 1/Gamma(alpha) int_0^t (t-s)^{alpha-1} f(s, y(s), y(s-h), u(s)) ds,
//
// plus L1 Caputo-derivative diagnostics.

#include <functional>
#include <span>
#include <vector>

#include "fracpmp/core.hpp"
#include "fracpmp/volterra.hpp"

namespace fracpmp {

enum class FddeScheme {
    ProductRectangle,   ///< explicit, first order
    PredictorCorrector  ///< rectangle predictor + product-trapezoid corrector
};

struct FddeSolverOptions {
    FddeScheme scheme = FddeScheme::ProductRectangle;
    int corrector_sweeps = 1;
};

namespace detail {

/// Right-hand side at node j given y_j and the delayed value y_{j-m}.
using NodeRhs = std::function<Vec(std::size_t j, const Vec& y, const Vec& y_delayed)>;

/// Marching core shared by the state, variational and reversed adjoint
/// solves. `history` holds the m samples at nodes -m..-1 (empty = zero).
std::vector<Vec> march_caputo(const Grid& grid, double alpha, const Vec& y0,
                              const std::vector<Vec>& history, const NodeRhs& rhs,
                              const FddeSolverOptions& opts);

}  // namespace detail

/// Throws GridMismatch, InvalidArgument on a malformed problem, and
/// NumericalBlowup when a node value exceeds 1e12.
Trajectory solve_fdde(const FddeProblem& problem, const ControlSignal& u, const Grid& grid,
                      const FddeSolverOptions& opts = {});

/// Variational equation along (y*, u*) for the control change u* -> u:
///   D^alpha Y = f_y Y + f_yh Y(t-h) + f_hat,   Y = 0 on [-h, 0],
/// Jacobians frozen at (t, y*(t), y*(t-h), u*(t)) and
/// f_hat(t) = f(t, y*, y*_h, u(t)) - f(t, y*, y*_h, u*(t)).
Trajectory solve_variational_fdde(const FddeProblem& problem, const Trajectory& y_star,
                                  const ControlSignal& u_star, const ControlSignal& u,
                                  const FddeSolverOptions& opts = {});

/// L1 approximation of the left Caputo derivative at nodes 1..N (exact for
/// piecewise-linear data). Entry 0 is left at zero.
std::vector<Vec> caputo_l1_derivative(const Trajectory& traj, double alpha);

/// Scalar L1 left and right Caputo derivatives on a uniform mesh with the
/// given step. The right derivative uses the sign convention
///   D^alpha_{T-} phi(t) = -1/Gamma(1-alpha) int_t^T (s-t)^{-alpha} phi'(s) ds,
/// so it reduces to -phi' at alpha = 1. Left: entry 0 undefined (zero);
/// right: entry N undefined (zero).
std::vector<double> caputo_l1_left(std::span<const double> values, double step, double alpha);
std::vector<double> caputo_l1_right(std::span<const double> values, double step, double alpha);

/// max_{0<j<N} |L1(y)(t_j) - f(t_j, y_j, y_{j-m}, u_j)|_inf.
double fdde_residual(const FddeProblem& problem, const Trajectory& y, const ControlSignal& u);

/// Both sides of the Riemann-Liouville integration-by-parts identity
///   int_0^T f D^alpha_{0+} g dt = int_0^T g D^alpha_{T-} f dt
/// for sampled scalar functions. The Caputo parts come from the L1
/// schemes and the trapezoid rule; the boundary terms g(0) t^{-alpha} and
/// f(T) (T-t)^{-alpha} are integrated against the piecewise-linear
/// interpolant with exact kernel moments.
struct IntegrationByParts {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_difference() const;
};

IntegrationByParts fractional_integration_by_parts(std::span<const double> f,
                                                   std::span<const double> g, double step,
                                                   double alpha);

}  // namespace fracpmp
