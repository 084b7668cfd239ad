#include "fracpmp/volterra.hpp"

#include <cmath>

namespace fracpmp {

SingularWeights::SingularWeights(const Grid& grid, double alpha)
    : alpha_(alpha), step_(grid.step()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("singular weights: alpha must lie in (0, 1]");
    }
    scale_ = std::pow(step_, alpha) / alpha;
    const std::size_t N = grid.node_count();
    lag_.resize(N);
    double prev = 0.0;  // k^alpha at k = 0
    for (std::size_t k = 0; k < N; ++k) {
        const double next = std::pow(static_cast<double>(k + 1), alpha);
        lag_[k] = scale_ * (next - prev);
        prev = next;
    }

    const double c = scale_ / (alpha + 1.0);
    const auto p = [alpha](double x) { return std::pow(x, alpha + 1.0); };
    hat_lag_.assign(N + 1, 0.0);
    hat_first_.assign(N + 1, 0.0);
    for (std::size_t d = 1; d <= N; ++d) {
        const double x = static_cast<double>(d);
        hat_lag_[d] = c * (p(x + 1.0) - 2.0 * p(x) + p(x - 1.0));
        hat_first_[d] = c * (p(x - 1.0) - (x - 1.0 - alpha) * std::pow(x, alpha));
    }
}

double SingularWeights::row_sum(std::size_t n) const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += lag_[k];
    return s;
}

double SingularWeights::hat_weight(std::size_t n, std::size_t j) const {
    if (j == n) return scale_ / (alpha_ + 1.0);
    if (j == 0) return hat_first_[n];
    return hat_lag_[n - j];
}

namespace {

void guard(const Vec& y, std::size_t n, const Grid& grid) {
    const double mag = y.lpNorm<Eigen::Infinity>();
    if (!(mag <= kBlowupThreshold)) {
        throw NumericalBlowup(n, grid.time(static_cast<std::ptrdiff_t>(n)), mag);
    }
}

}  // namespace

Trajectory solve_vide(const VideProblem& problem, const ControlSignal& u, const Grid& grid,
                      const VideSolverOptions& opts) {
    problem.validate();
    grid.require_problem(problem.horizon, problem.delay);
    if (!u.grid().same_as(grid)) {
        throw GridMismatch("solve_vide: control lives on a different grid");
    }
    const std::size_t N = grid.node_count();
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    const auto n_state = static_cast<Eigen::Index>(problem.state_dim);
    const SingularWeights w(grid, problem.alpha);
    const Vec zero = Vec::Zero(n_state);

    std::vector<Vec> y(N + 1, zero);
    const auto delayed = [&](std::ptrdiff_t j) -> const Vec& {
        return j >= 0 ? y[static_cast<std::size_t>(j)] : zero;
    };

    std::vector<Vec> F;  // F[k] = f(t_n, t_k, y_k, y_{k-m}, u_k) for the current n
    F.reserve(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        const double tn = grid.time(static_cast<std::ptrdiff_t>(n));
        F.clear();
        Vec acc = problem.eta(tn);
        if (acc.size() != n_state) {
            throw InvalidArgument("solve_vide: eta has the wrong dimension");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = static_cast<std::ptrdiff_t>(j);
            F.push_back(problem.f(tn, grid.time(jj), y[j], delayed(jj - m), u.node(j)));
        }
        if (!opts.refine || n == 0) {
            for (std::size_t j = 0; j < n; ++j) acc.noalias() += w.weight(n, j) * F[j];
            y[n] = std::move(acc);
        } else {
            // cells 0..n-2 use averaged end values; the last cell needs
            // F at t_n itself, which depends on y_n
            for (std::size_t j = 0; j + 1 < n; ++j) {
                acc.noalias() += 0.5 * w.weight(n, j) * (F[j] + F[j + 1]);
            }
            const double w_last = w.weight(n, n - 1);
            Vec yn = acc + w_last * F[n - 1];
            const auto nn = static_cast<std::ptrdiff_t>(n);
            for (int sweep = 0; sweep < kVideRefinementSweeps; ++sweep) {
                const Vec Fn = problem.f(tn, tn, yn, delayed(nn - m), u.node(n));
                yn = acc + 0.5 * w_last * (F[n - 1] + Fn);
            }
            y[n] = std::move(yn);
        }
        guard(y[n], n, grid);
    }
    return Trajectory(grid, std::move(y));
}

}  // namespace fracpmp
