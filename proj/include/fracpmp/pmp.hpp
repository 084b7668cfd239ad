#pragma once

// Hamiltonians, pointwise maximization over U, the maximum-principle
// residual certificate, the payoff functional, the forward-backward sweep
// and the adjoint gradient check.
//
// Orientation: the payoff J is minimized and the Hamiltonian
//   FDDE: Psi(t,u) = psi(t)^T f(t, y*(t), y*(t-h), u) - g(t, y*(t), y*(t-h), u)
//   VIDE: Psi(s,u) = int_s^T psi(t)^T f(t, s, y*(s), y*(s-h), u) (t-s)^{alpha-1} dt - g(s, ...)
// is maximized.

#include <functional>
#include <memory>
#include <vector>

#include "fracpmp/adjoint.hpp"
#include "fracpmp/core.hpp"
#include "fracpmp/fdde.hpp"
#include "fracpmp/volterra.hpp"

namespace fracpmp {

struct ArgmaxOptions {
    /// Coarse scan points per Box dimension.
    int grid_points = 33;
    /// Golden-section bracket width at which refinement stops.
    double refine_tol = 1e-8;
};

struct SweepParams {
    double beta = 0.5;
    double tol = 1e-6;
    int max_iter = 500;
    ArgmaxOptions argmax{};
    /// Scheme for the FDDE state solve. The hat interpolant of the control
    /// matches the trapezoid payoff; with frozen left values a switch-off
    /// would be credited half a cell of control it never applied.
    FddeSolverOptions fdde{FddeScheme::PredictorCorrector, 1};
    /// Scheme for the reversed FDDE adjoint solve. Its source switches on at
    /// t = T - h, a grid node, where the rectangle rule stays exact while the
    /// hat interpolant smears the jump over one cell.
    FddeSolverOptions adjoint_fdde{};
    VideSolverOptions vide{};
    AdjointSourceConvention convention = AdjointSourceConvention::ShiftedIndicator;

    void validate() const;
};

struct PmpReport {
    /// r_j = max_u Psi(t_j, u) - Psi(t_j, u*(t_j)) >= 0.
    std::vector<double> residuals;
    double max_residual = 0.0;
    /// Trapezoid integral of r over [0, T].
    double l1_residual = 0.0;
    double objective = 0.0;
};

/// J = int_0^T g(t, y(t), y(t-h), u(t)) dt by the composite trapezoid rule.
double objective(const Problem& problem, const Trajectory& y, const ControlSignal& u);

double hamiltonian_fdde(const AdjointTrajectory& psi, const FddeProblem& problem,
                        const Trajectory& y_star, std::size_t node, const Vec& u);

/// `weights` must be built on the trajectory's grid with the problem's alpha.
double hamiltonian_vide(const AdjointTrajectory& psi, const VideProblem& problem,
                        const Trajectory& y_star, std::size_t node, const Vec& u,
                        const SingularWeights& weights);

/// argmax over U. Finite: exhaustive. Box: coarse lexicographic grid scan
/// followed by one golden-section pass per coordinate; a refined point only
/// replaces the incumbent when strictly better, so affine objectives keep
/// their vertex. Ties go to the lexicographically smallest control.
Vec maximize_hamiltonian(const std::function<double(const Vec&)>& H, const ControlSet& U,
                         const ArgmaxOptions& opts = {});

PmpReport pmp_residual(const Problem& problem, const Trajectory& y_star,
                       const ControlSignal& u_star, const AdjointTrajectory& psi,
                       const ArgmaxOptions& opts = {});

/// Grid-bound solvers dispatched on the problem class.
Trajectory solve_state(const Problem& problem, const ControlSignal& u, const SweepParams& params = {});
AdjointTrajectory solve_costate(const Problem& problem, const Trajectory& y,
                                const ControlSignal& u, const SweepParams& params = {});

struct SweepResult {
    Trajectory y;
    ControlSignal u;
    AdjointTrajectory psi;
    PmpReport report;
    int iterations = 0;
    /// sup_j rho(u_{k+1,j}, u_{k,j}) per iteration.
    std::vector<double> control_change;
};

/// Raised when the sweep hits max_iter; carries the last iterate.
class NotConverged : public Error {
public:
    explicit NotConverged(std::shared_ptr<const SweepResult> last)
        : Error("forward-backward sweep did not converge in " +
                std::to_string(last->iterations) + " iterations"),
          last_(std::move(last)) {}

    const SweepResult& last() const noexcept { return *last_; }

private:
    std::shared_ptr<const SweepResult> last_;
};

/// Fixed-point iteration on the necessary conditions:
/// (i) state with u_k, (ii) adjoint, (iii) u_hat_j = argmax Psi(t_j, .)
/// (the current value is kept unless strictly beaten), (iv) Box:
/// u_{k+1} = project((1-beta) u_k + beta u_hat), Finite: u_{k+1} = u_hat.
/// Stops when sup_j rho(u_{k+1,j}, u_{k,j}) <= tol.
SweepResult forward_backward_sweep(const Problem& problem, const ControlSignal& u0,
                                   const SweepParams& params = {});

struct GateauxCheck {
    double adjoint_estimate = 0.0;
    double fd_estimate = 0.0;
    double relative_error = 0.0;
};

/// Compares -int_0^T d_u Psi(s, u(s)) . du(s) ds (central differences in u,
/// step 1e-5) with (J(u + eps du) - J(u - eps du)) / (2 eps).
/// Box control sets only; throws InadmissibleDirection if u +- eps du leaves U.
GateauxCheck gateaux_check(const Problem& problem, const ControlSignal& u,
                           const std::vector<Vec>& direction, double eps,
                           const SweepParams& params = {});

}  // namespace fracpmp
