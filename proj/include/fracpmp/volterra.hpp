#pragma once

#include <cstddef>
#include <vector>

#include "fracpmp/core.hpp"

namespace fracpmp {

/// Product-integration weights for the weakly singular kernel (t-s)^{alpha-1}
/// on a uniform grid:
///
///   int_0^{t_n} (t_n - s)^{alpha-1} phi(s) ds  ~  sum_{j<n} w_{n,j} phi(t_j),
///   w_{n,j} = ((t_n - t_j)^alpha - (t_n - t_{j+1})^alpha) / alpha.
///
/// phi is frozen at the left end of each cell and the kernel integrated
/// exactly, so the rule is exact for piecewise-constant phi. On a uniform
/// grid w_{n,j} depends only on n - j; only that lag vector is stored.
class SingularWeights {
public:
    SingularWeights(const Grid& grid, double alpha);

    double alpha() const noexcept { return alpha_; }
    double step() const noexcept { return step_; }
    std::size_t node_count() const noexcept { return lag_.size(); }

    /// w_{n,j} for 0 <= j < n <= N.
    double weight(std::size_t n, std::size_t j) const { return lag_[n - j - 1]; }

    /// Weight of the lag-k cell (k = n - j - 1), shared by the forward
    /// rule and its reversal  int_{s_j}^{T} (t - s_j)^{alpha-1} phi(t) dt
    /// ~ sum_{i>j} lag(i - j - 1) phi(t_i).
    double lag(std::size_t k) const { return lag_[k]; }

    /// sum_{j<n} w_{n,j}; equals t_n^alpha / alpha.
    double row_sum(std::size_t n) const;

    /// Product-trapezoid (hat function) weight a_{n,j}, 0 <= j <= n, for the
    /// piecewise-linear interpolant of phi. Used by the corrector stage.
    double hat_weight(std::size_t n, std::size_t j) const;

private:
    double alpha_;
    double step_;
    double scale_;  // step^alpha / alpha
    std::vector<double> lag_;
    std::vector<double> hat_lag_;    // a_{n,j} for 1 <= j < n, indexed by n - j
    std::vector<double> hat_first_;  // a_{n,0}, indexed by n
};

struct VideSolverOptions {
    /// After the explicit left-endpoint step, replace the frozen value on
    /// each cell by the average of its end values and re-solve the
    /// implicit last cell by fixed-point iteration (two sweeps).
    bool refine = false;
};

inline constexpr int kVideRefinementSweeps = 2;

/// Marching solver for the Volterra delay integral equation.
///
/// y_n = eta(t_n) + sum_{j<n} w_{n,j} f(t_n, t_j, y_j, y_{j-m}, u_j).
/// The delayed argument y_{j-m} is always an earlier node (or the zero
/// history), so each step is explicit.
/// Throws GridMismatch, NumericalBlowup (|y_n| > 1e12).
Trajectory solve_vide(const VideProblem& problem, const ControlSignal& u, const Grid& grid,
                      const VideSolverOptions& opts = {});

/// Largest magnitude a marching solver accepts before reporting blowup.
inline constexpr double kBlowupThreshold = 1e12;

}  // namespace fracpmp
