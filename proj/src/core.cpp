#include "fracpmp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracpmp {

namespace {

bool close_rel(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

void check_dim(const std::vector<Vec>& vs, std::ptrdiff_t dim, const char* what) {
    for (const auto& v : vs) {
        if (v.size() != dim) {
            throw InvalidArgument(std::string(what) + ": inconsistent vector dimension");
        }
    }
}

}  // namespace

Grid Grid::make(double horizon, double delay, std::size_t nodes_per_delay) {
    if (!(horizon > 0.0) || !(delay > 0.0) || nodes_per_delay == 0) {
        throw InvalidArgument("grid: horizon, delay and nodes_per_delay must be positive");
    }
    if (horizon < delay * (1.0 - 1e-12)) {
        throw InvalidArgument("grid: horizon shorter than the delay");
    }
    const double step = delay / static_cast<double>(nodes_per_delay);
    const double ratio = horizon / step;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-12 * ratio) {
        throw NonAlignedHorizon("grid: horizon " + std::to_string(horizon) +
                                " is not a multiple of the step " + std::to_string(step));
    }
    return Grid(horizon, delay, step, static_cast<std::size_t>(n), nodes_per_delay);
}

bool Grid::same_as(const Grid& other) const noexcept {
    return node_count_ == other.node_count_ && delay_index_ == other.delay_index_ &&
           close_rel(horizon_, other.horizon_) && close_rel(delay_, other.delay_);
}

void Grid::require_problem(double horizon, double delay) const {
    if (!close_rel(horizon, horizon_) || !close_rel(delay, delay_)) {
        throw GridMismatch("grid (T=" + std::to_string(horizon_) + ", h=" + std::to_string(delay_) +
                           ") does not match problem (T=" + std::to_string(horizon) +
                           ", h=" + std::to_string(delay) + ")");
    }
}

// Trajectory ---------------------------------------------------------------

Trajectory::Trajectory(Grid grid, std::vector<Vec> values)
    : grid_(grid), values_(std::move(values)) {
    check();
}

Trajectory::Trajectory(Grid grid, std::vector<Vec> values, std::vector<Vec> history)
    : grid_(grid), values_(std::move(values)), history_(std::move(history)) {
    check();
}

void Trajectory::check() {
    if (values_.size() != grid_.node_count() + 1) {
        throw InvalidArgument("trajectory: expected N+1 node values");
    }
    const auto dim = values_.front().size();
    check_dim(values_, dim, "trajectory");
    zero_ = Vec::Zero(dim);
    if (history_) {
        if (history_->size() != grid_.delay_index() + 1) {
            throw InvalidArgument("trajectory: history needs m+1 samples on [-h, 0]");
        }
        check_dim(*history_, dim, "trajectory history");
        if ((history_->back() - values_.front()).lpNorm<Eigen::Infinity>() >
            1e-12 * (1.0 + values_.front().lpNorm<Eigen::Infinity>())) {
            throw InvalidArgument("trajectory: history at t=0 differs from the first node value");
        }
    }
}

const Vec& Trajectory::node(std::ptrdiff_t j) const {
    const auto m = static_cast<std::ptrdiff_t>(grid_.delay_index());
    const auto n = static_cast<std::ptrdiff_t>(grid_.node_count());
    if (j < -m || j > n) {
        throw OutOfDomain("trajectory: node index " + std::to_string(j) + " outside [-m, N]");
    }
    if (j >= 0) {
        return values_[static_cast<std::size_t>(j)];
    }
    if (!history_) {
        return zero_;
    }
    return (*history_)[static_cast<std::size_t>(j + m)];
}

Vec Trajectory::eval(double t) const {
    const double h = grid_.delay();
    const double T = grid_.horizon();
    const double tol = 1e-12 * std::max(1.0, T);
    if (t < -h - tol || t > T + tol) {
        throw OutOfDomain("trajectory: t = " + std::to_string(t) + " outside [-h, T]");
    }
    if (t <= 0.0 && !history_) {
        return zero_;
    }
    const auto m = static_cast<std::ptrdiff_t>(grid_.delay_index());
    const auto n = static_cast<std::ptrdiff_t>(grid_.node_count());
    const double x = t / grid_.step();
    auto j = static_cast<std::ptrdiff_t>(std::floor(x));
    j = std::clamp<std::ptrdiff_t>(j, -m, n);
    const double frac = x - static_cast<double>(j);
    if (j == n || frac <= 0.0) {
        return node(j);
    }
    return (1.0 - frac) * node(j) + frac * node(j + 1);
}

// AdjointTrajectory ---------------------------------------------------------

AdjointTrajectory::AdjointTrajectory(Grid grid, std::vector<Vec> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count() + 1) {
        throw InvalidArgument("adjoint trajectory: expected N+1 node values");
    }
    check_dim(values_, values_.front().size(), "adjoint trajectory");
    zero_ = Vec::Zero(values_.front().size());
}

const Vec& AdjointTrajectory::node(std::ptrdiff_t j) const {
    const auto m = static_cast<std::ptrdiff_t>(grid_.delay_index());
    const auto n = static_cast<std::ptrdiff_t>(grid_.node_count());
    if (j < 0 || j > n + m) {
        throw OutOfDomain("adjoint: node index " + std::to_string(j) + " outside [0, N+m]");
    }
    if (j > n) {
        return zero_;
    }
    return values_[static_cast<std::size_t>(j)];
}

Vec AdjointTrajectory::eval(double t) const {
    const double T = grid_.horizon();
    const double tol = 1e-12 * std::max(1.0, T);
    if (t < -tol || t > T + grid_.delay() + tol) {
        throw OutOfDomain("adjoint: t = " + std::to_string(t) + " outside [0, T+h]");
    }
    if (t >= T) {
        return zero_;
    }
    const double x = std::max(t, 0.0) / grid_.step();
    const auto j = static_cast<std::ptrdiff_t>(std::floor(x));
    const double frac = x - static_cast<double>(j);
    if (frac <= 0.0) {
        return node(j);
    }
    return (1.0 - frac) * node(j) + frac * node(j + 1);
}

// ControlSet -----------------------------------------------------------------

bool lexicographically_less(const Vec& a, const Vec& b) {
    for (Eigen::Index k = 0; k < std::min(a.size(), b.size()); ++k) {
        if (a[k] < b[k]) return true;
        if (a[k] > b[k]) return false;
    }
    return a.size() < b.size();
}

ControlSet ControlSet::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) {
        throw InvalidArgument("control box: lo and hi differ in dimension");
    }
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        if (!(lo[k] <= hi[k])) {
            throw InvalidArgument("control box: lo > hi in component " + std::to_string(k));
        }
    }
    return ControlSet(Box{std::move(lo), std::move(hi)});
}

ControlSet ControlSet::finite(std::vector<Vec> points) {
    if (points.empty()) {
        throw InvalidArgument("finite control set: no points");
    }
    check_dim(points, points.front().size(), "finite control set");
    std::sort(points.begin(), points.end(), lexicographically_less);
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (points[k] == points[k - 1]) {
            throw InvalidArgument("finite control set: duplicate point");
        }
    }
    return ControlSet(Finite{std::move(points)});
}

std::size_t ControlSet::dim() const noexcept {
    if (const auto* b = as_box()) return static_cast<std::size_t>(b->lo.size());
    return static_cast<std::size_t>(as_finite()->points.front().size());
}

bool ControlSet::is_singleton() const noexcept {
    if (const auto* b = as_box()) return b->lo == b->hi;
    return as_finite()->points.size() == 1;
}

bool ControlSet::contains(const Vec& v, double tol) const {
    if (static_cast<std::size_t>(v.size()) != dim()) return false;
    if (const auto* b = as_box()) {
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            if (v[k] < b->lo[k] - tol || v[k] > b->hi[k] + tol) return false;
        }
        return true;
    }
    for (const auto& p : as_finite()->points) {
        if ((p - v).lpNorm<Eigen::Infinity>() <= tol) return true;
    }
    return false;
}

Vec ControlSet::project(const Vec& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) {
        throw InvalidArgument("control projection: dimension mismatch");
    }
    if (const auto* b = as_box()) {
        return v.cwiseMax(b->lo).cwiseMin(b->hi);
    }
    // points are sorted, so keeping the first strict minimum breaks ties
    // toward the lexicographically smallest point
    const auto& pts = as_finite()->points;
    std::size_t best = 0;
    double best_d = distance(pts[0], v);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double d = distance(pts[k], v);
        if (d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return pts[best];
}

// ControlSignal --------------------------------------------------------------

ControlSignal::ControlSignal(Grid grid, std::vector<Vec> values, const ControlSet& set)
    : grid_(grid), values_(std::move(values)), dim_(set.dim()) {
    if (values_.size() != grid_.node_count() + 1) {
        throw InvalidArgument("control signal: expected N+1 node values");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!set.contains(values_[j])) {
            throw InvalidArgument("control signal: value at node " + std::to_string(j) +
                                  " is not admissible");
        }
    }
}

ControlSignal ControlSignal::constant(const Grid& grid, const Vec& value, const ControlSet& set) {
    return ControlSignal(grid, std::vector<Vec>(grid.node_count() + 1, value), set);
}

// Problems -------------------------------------------------------------------

namespace {

template <class P>
void validate_common(const P& p, const char* what) {
    const std::string w(what);
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw InvalidArgument(w + ": alpha must lie in (0, 1]");
    }
    if (!(p.horizon > 0.0) || !(p.delay > 0.0)) {
        throw InvalidArgument(w + ": horizon and delay must be positive");
    }
    if (p.state_dim == 0) {
        throw InvalidArgument(w + ": state dimension must be positive");
    }
    if (!p.f || !p.f_y || !p.f_yh || !p.g || !p.g_y || !p.g_yh) {
        throw InvalidArgument(w + ": missing callback");
    }
    if (p.controls.dim() != p.control_dim) {
        throw InvalidArgument(w + ": control set dimension differs from control_dim");
    }
}

}  // namespace

void FddeProblem::validate() const { validate_common(*this, "fdde problem"); }

void VideProblem::validate() const {
    validate_common(*this, "vide problem");
    if (!eta) {
        throw InvalidArgument("vide problem: missing free term eta");
    }
}

const ControlSet& controls_of(const Problem& p) {
    return std::visit([](const auto& q) -> const ControlSet& { return q.controls; }, p);
}

double horizon_of(const Problem& p) {
    return std::visit([](const auto& q) { return q.horizon; }, p);
}

double delay_of(const Problem& p) {
    return std::visit([](const auto& q) { return q.delay; }, p);
}

}  // namespace fracpmp
