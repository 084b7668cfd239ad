#pragma once

// Backward costate solvers.
//
// FDDE adjoint (right Caputo derivative with advanced argument):
//   D^alpha_{T-} psi = -g_y^T - chi_{(0,T-h)} g_yh(t+h, .)^T
//                      + f_y^T psi + chi_{(0,T-h)} f_yh(t+h, .)^T psi(t+h),
//   psi = 0 on [T, T+h].
// The substitution phi(tau) = psi(T - tau) turns it into a left Caputo
// delay equation with zero history, which is solved by the forward
// marching core.
//
// VIDE adjoint (backward Volterra equation):
//   psi(s) = -g_y^T - [g_yh term] + int_s^T f_y(t,s,.)^T psi(t) (t-s)^{alpha-1} dt
//            + int_{s+h}^T f_yh(t,s+h,.)^T psi(t) (t-h-s)^{alpha-1} dt.
// Marching backward from s = T, every integral only involves already
// computed nodes, so each step is explicit.

#include "fracpmp/core.hpp"
#include "fracpmp/fdde.hpp"

namespace fracpmp {

/// Which g_yh source term the adjoint uses.
enum class AdjointSourceConvention {
    /// -chi_{(0,T-h)}(s) g_yh(s+h, y*(s+h), y*(s), u*(s+h)): what the
    /// duality argument produces for a delayed running cost.
    ShiftedIndicator,
    /// -g_yh(s, y*(s), y*(s-h), u*(s)) without shift or indicator.
    AsDisplayed
};

struct AdjointOptions {
    AdjointSourceConvention convention = AdjointSourceConvention::ShiftedIndicator;
    FddeSolverOptions solver{};
};

AdjointTrajectory solve_adjoint_fdde(const FddeProblem& problem, const Trajectory& y_star,
                                     const ControlSignal& u_star, const Grid& grid,
                                     const AdjointOptions& opts = {});

AdjointTrajectory solve_adjoint_vide(
    const VideProblem& problem, const Trajectory& y_star, const ControlSignal& u_star,
    const Grid& grid,
    AdjointSourceConvention convention = AdjointSourceConvention::ShiftedIndicator);

/// The two sides of the duality identity behind the maximum principle:
///   state_side   = int_0^T [g_y Y + chi_{(0,T-h)} g_yh(t+h, .) Y] dt
///   adjoint_side = int_0^T psi^T f_hat dt
/// For exact Y and psi they satisfy state_side = -adjoint_side; `gap` is
/// |state_side + adjoint_side| and `relative` divides it by the larger
/// magnitude. Both integrals use the trapezoid rule.
struct DualityGap {
    double state_side = 0.0;
    double adjoint_side = 0.0;
    double gap = 0.0;
    double relative = 0.0;
};

/// Y should solve the variational equation for u* -> u (see
/// solve_variational_fdde) and psi the adjoint along (y*, u*).
DualityGap duality_gap(const FddeProblem& problem, const Trajectory& y_star,
                       const ControlSignal& u_star, const ControlSignal& u, const Trajectory& Y,
                       const AdjointTrajectory& psi);

}  // namespace fracpmp
