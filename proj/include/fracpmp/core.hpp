#pragma once

// Shared domain types: the uniform delay-aligned grid, state/costate
// trajectories, admissible control sets and the two problem classes.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "fracpmp/errors.hpp"

namespace fracpmp {

using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Mat = Eigen::MatrixXd;

/// Uniform mesh t_j = j*step on [0, horizon] whose step divides the delay:
/// delay = delay_index * step, horizon = node_count * step.
class Grid {
public:
    /// Throws InvalidArgument for nonpositive inputs or horizon < delay and
    /// NonAlignedHorizon when horizon is not a whole number of steps.
    static Grid make(double horizon, double delay, std::size_t nodes_per_delay);

    double horizon() const noexcept { return horizon_; }
    double delay() const noexcept { return delay_; }
    double step() const noexcept { return step_; }
    /// N; nodes are indexed 0..N.
    std::size_t node_count() const noexcept { return node_count_; }
    /// m, the delay expressed in steps.
    std::size_t delay_index() const noexcept { return delay_index_; }

    double time(std::ptrdiff_t j) const noexcept { return static_cast<double>(j) * step_; }

    /// Same horizon, delay and resolution.
    bool same_as(const Grid& other) const noexcept;

    /// Throws GridMismatch unless horizon and delay agree (1e-12 relative).
    void require_problem(double horizon, double delay) const;

private:
    Grid(double horizon, double delay, double step, std::size_t n, std::size_t m)
        : horizon_(horizon), delay_(delay), step_(step), node_count_(n), delay_index_(m) {}

    double horizon_;
    double delay_;
    double step_;
    std::size_t node_count_;
    std::size_t delay_index_;
};

/// State samples on the grid plus the history segment on [-h, 0].
class Trajectory {
public:
    /// Zero history (the standing initial condition y = 0 on [-h, 0]).
    Trajectory(Grid grid, std::vector<Vec> values);
    /// Sampled history on the m+1 nodes -h, ..., 0; history.back() must
    /// equal values.front().
    Trajectory(Grid grid, std::vector<Vec> values, std::vector<Vec> history);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return zero_.size(); }
    const std::vector<Vec>& values() const noexcept { return values_; }
    bool has_zero_history() const noexcept { return !history_.has_value(); }

    /// Node value for j in [-m, N]; negative indices read the history.
    const Vec& node(std::ptrdiff_t j) const;

    /// Piecewise-linear evaluation on [-h, T]; OutOfDomain outside.
    Vec eval(double t) const;

private:
    void check();

    Grid grid_;
    std::vector<Vec> values_;
    std::optional<std::vector<Vec>> history_;
    Vec zero_;
};

/// Costate samples on t_0..t_N, identically zero on the tail (T, T+h].
class AdjointTrajectory {
public:
    AdjointTrajectory(Grid grid, std::vector<Vec> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return zero_.size(); }
    const std::vector<Vec>& values() const noexcept { return values_; }

    /// Node value for j in [0, N+m]; j > N is the zero tail.
    const Vec& node(std::ptrdiff_t j) const;

    /// Piecewise-linear on [0, T); the zero vector on [T, T+h].
    Vec eval(double t) const;

private:
    Grid grid_;
    std::vector<Vec> values_;
    Vec zero_;
};

/// Admissible control set U with the Euclidean metric.
class ControlSet {
public:
    struct Box {
        Vec lo;
        Vec hi;
    };
    struct Finite {
        std::vector<Vec> points;  // sorted lexicographically
    };

    /// Zero-dimensional box; only useful as a placeholder.
    ControlSet() : set_(Box{Vec(0), Vec(0)}) {}

    static ControlSet box(Vec lo, Vec hi);
    static ControlSet finite(std::vector<Vec> points);

    std::size_t dim() const noexcept;
    const Box* as_box() const noexcept { return std::get_if<Box>(&set_); }
    const Finite* as_finite() const noexcept { return std::get_if<Finite>(&set_); }
    bool is_singleton() const noexcept;

    bool contains(const Vec& v, double tol = 1e-12) const;

    /// Box: componentwise clamp. Finite: nearest point, ties to the
    /// lexicographically smallest.
    Vec project(const Vec& v) const;

    static double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

private:
    explicit ControlSet(std::variant<Box, Finite> s) : set_(std::move(s)) {}
    std::variant<Box, Finite> set_;
};

/// Strict lexicographic order on vectors of equal length.
bool lexicographically_less(const Vec& a, const Vec& b);

/// Per-node control values, every one admissible for the set it was built with.
class ControlSignal {
public:
    ControlSignal(Grid grid, std::vector<Vec> values, const ControlSet& set);

    static ControlSignal constant(const Grid& grid, const Vec& value, const ControlSet& set);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Vec>& values() const noexcept { return values_; }
    const Vec& node(std::size_t j) const { return values_.at(j); }

private:
    Grid grid_;
    std::vector<Vec> values_;
    std::size_t dim_;
};

using DynamicsFn = std::function<Vec(double t, const Vec& y, const Vec& y_h, const Vec& u)>;
using DynamicsJacobianFn = std::function<Mat(double t, const Vec& y, const Vec& y_h, const Vec& u)>;
using CostFn = std::function<double(double t, const Vec& y, const Vec& y_h, const Vec& u)>;
using CostGradientFn = std::function<RowVec(double t, const Vec& y, const Vec& y_h, const Vec& u)>;
using HistoryFn = std::function<Vec(double t)>;

using KernelFn = std::function<Vec(double t, double s, const Vec& y, const Vec& y_h, const Vec& u)>;
using KernelJacobianFn =
    std::function<Mat(double t, double s, const Vec& y, const Vec& y_h, const Vec& u)>;
using FreeTermFn = std::function<Vec(double t)>;

/// Caputo FDDE  D^alpha y = f(t, y(t), y(t-h), u(t))  with running cost g.
struct FddeProblem {
    double alpha = 0.5;
    double horizon = 1.0;
    double delay = 1.0;
    std::size_t state_dim = 1;
    std::size_t control_dim = 1;
    DynamicsFn f;
    DynamicsJacobianFn f_y;
    DynamicsJacobianFn f_yh;
    CostFn g;
    CostGradientFn g_y;
    CostGradientFn g_yh;
    ControlSet controls;
    /// Initial function on [-h, 0]; empty means y = 0 there.
    HistoryFn history;

    /// Throws InvalidArgument on inconsistent fields (alpha must lie in (0, 1]).
    void validate() const;
};

/// Volterra delay integral equation
///   y(t) = eta(t) + int_0^t f(t, s, y(s), y(s-h), u(s)) / (t-s)^(1-alpha) ds
/// with zero history and running cost g.
struct VideProblem {
    double alpha = 0.5;
    double horizon = 1.0;
    double delay = 1.0;
    std::size_t state_dim = 1;
    std::size_t control_dim = 1;
    KernelFn f;
    KernelJacobianFn f_y;
    KernelJacobianFn f_yh;
    FreeTermFn eta;
    CostFn g;
    CostGradientFn g_y;
    CostGradientFn g_yh;
    ControlSet controls;

    void validate() const;
};

using Problem = std::variant<FddeProblem, VideProblem>;

enum class ProblemKind { Fdde, Vide };

inline ProblemKind kind_of(const Problem& p) {
    return p.index() == 0 ? ProblemKind::Fdde : ProblemKind::Vide;
}

const ControlSet& controls_of(const Problem& p);
double horizon_of(const Problem& p);
double delay_of(const Problem& p);

}  // namespace fracpmp
