#include "fracpmp/fdde.hpp"

#include <algorithm>
#include <cmath>

#include "fracpmp/specfun.hpp"

namespace fracpmp {

namespace detail {

std::vector<Vec> march_caputo(const Grid& grid, double alpha, const Vec& y0,
                              const std::vector<Vec>& history, const NodeRhs& rhs,
                              const FddeSolverOptions& opts) {
    if (opts.corrector_sweeps < 0) {
        throw InvalidArgument("fdde solver: corrector_sweeps must be nonnegative");
    }
    const std::size_t N = grid.node_count();
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    if (!history.empty() && history.size() != static_cast<std::size_t>(m)) {
        throw InvalidArgument("fdde solver: history needs m samples");
    }
    const SingularWeights w(grid, alpha);
    const double inv_gamma = 1.0 / gamma_fn(alpha);
    const Vec zero = Vec::Zero(y0.size());
    const bool corrector =
        opts.scheme == FddeScheme::PredictorCorrector && opts.corrector_sweeps > 0;

    std::vector<Vec> y(N + 1, zero);
    std::vector<Vec> F(N + 1, zero);
    const auto delayed = [&](std::size_t n) -> const Vec& {
        const auto k = static_cast<std::ptrdiff_t>(n) - m;
        if (k >= 0) return y[static_cast<std::size_t>(k)];
        return history.empty() ? zero : history[static_cast<std::size_t>(k + m)];
    };

    y[0] = y0;
    F[0] = rhs(0, y[0], delayed(0));
    for (std::size_t n = 1; n <= N; ++n) {
        Vec acc = Vec::Zero(y0.size());
        for (std::size_t j = 0; j < n; ++j) acc.noalias() += w.weight(n, j) * F[j];
        Vec yn = y0 + inv_gamma * acc;
        if (corrector) {
            Vec hist = Vec::Zero(y0.size());
            for (std::size_t j = 0; j < n; ++j) hist.noalias() += w.hat_weight(n, j) * F[j];
            const double a_nn = w.hat_weight(n, n);
            for (int sweep = 0; sweep < opts.corrector_sweeps; ++sweep) {
                yn = y0 + inv_gamma * (hist + a_nn * rhs(n, yn, delayed(n)));
            }
        }
        const double mag = yn.lpNorm<Eigen::Infinity>();
        if (!(mag <= kBlowupThreshold)) {
            throw NumericalBlowup(n, grid.time(static_cast<std::ptrdiff_t>(n)), mag);
        }
        y[n] = std::move(yn);
        F[n] = rhs(n, y[n], delayed(n));
    }
    return y;
}

}  // namespace detail

namespace {

void check_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_as(b)) {
        throw GridMismatch(std::string(what) + ": inputs live on different grids");
    }
}

}  // namespace

Trajectory solve_fdde(const FddeProblem& problem, const ControlSignal& u, const Grid& grid,
                      const FddeSolverOptions& opts) {
    problem.validate();
    grid.require_problem(problem.horizon, problem.delay);
    check_same_grid(u.grid(), grid, "solve_fdde");
    const auto n_state = static_cast<Eigen::Index>(problem.state_dim);
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());

    Vec y0 = Vec::Zero(n_state);
    std::vector<Vec> history;
    if (problem.history) {
        history.reserve(static_cast<std::size_t>(m));
        for (std::ptrdiff_t k = -m; k < 0; ++k) history.push_back(problem.history(grid.time(k)));
        y0 = problem.history(0.0);
        if (y0.size() != n_state) {
            throw InvalidArgument("solve_fdde: history has the wrong dimension");
        }
    }

    const auto rhs = [&](std::size_t j, const Vec& y, const Vec& yd) -> Vec {
        Vec v = problem.f(grid.time(static_cast<std::ptrdiff_t>(j)), y, yd, u.node(j));
        if (v.size() != n_state) {
            throw InvalidArgument("solve_fdde: f returned the wrong dimension");
        }
        return v;
    };
    auto y = detail::march_caputo(grid, problem.alpha, y0, history, rhs, opts);
    if (!problem.history) {
        return Trajectory(grid, std::move(y));
    }
    history.push_back(y0);
    return Trajectory(grid, std::move(y), std::move(history));
}

Trajectory solve_variational_fdde(const FddeProblem& problem, const Trajectory& y_star,
                                  const ControlSignal& u_star, const ControlSignal& u,
                                  const FddeSolverOptions& opts) {
    problem.validate();
    const Grid& grid = y_star.grid();
    grid.require_problem(problem.horizon, problem.delay);
    check_same_grid(u_star.grid(), grid, "solve_variational_fdde");
    check_same_grid(u.grid(), grid, "solve_variational_fdde");
    const std::size_t N = grid.node_count();
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());

    std::vector<Mat> Jy(N + 1), Jyh(N + 1);
    std::vector<Vec> f_hat(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        const double t = grid.time(jj);
        const Vec& y = y_star.node(jj);
        const Vec& yd = y_star.node(jj - m);
        Jy[j] = problem.f_y(t, y, yd, u_star.node(j));
        Jyh[j] = problem.f_yh(t, y, yd, u_star.node(j));
        f_hat[j] = problem.f(t, y, yd, u.node(j)) - problem.f(t, y, yd, u_star.node(j));
    }
    const auto rhs = [&](std::size_t j, const Vec& Y, const Vec& Yd) -> Vec {
        return Jy[j] * Y + Jyh[j] * Yd + f_hat[j];
    };
    auto Y = detail::march_caputo(grid, problem.alpha,
                                  Vec::Zero(static_cast<Eigen::Index>(problem.state_dim)), {},
                                  rhs, opts);
    return Trajectory(grid, std::move(Y));
}

namespace {

// b_k = (k+1)^{1-alpha} - k^{1-alpha}
std::vector<double> l1_coefficients(std::size_t count, double alpha) {
    std::vector<double> b(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = static_cast<double>(k);
        b[k] = std::pow(x + 1.0, 1.0 - alpha) - std::pow(x, 1.0 - alpha);
    }
    return b;
}

void require_caputo_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("L1 scheme: alpha must lie in (0, 1]");
    }
}

}  // namespace

std::vector<Vec> caputo_l1_derivative(const Trajectory& traj, double alpha) {
    require_caputo_order(alpha);
    const std::size_t N = traj.grid().node_count();
    const double scale = std::pow(traj.grid().step(), -alpha) / gamma_fn(2.0 - alpha);
    const auto b = l1_coefficients(N, alpha);
    const auto& y = traj.values();
    std::vector<Vec> d(N + 1, Vec::Zero(static_cast<Eigen::Index>(traj.dim())));
    for (std::size_t n = 1; n <= N; ++n) {
        Vec acc = Vec::Zero(static_cast<Eigen::Index>(traj.dim()));
        for (std::size_t k = 0; k < n; ++k) acc.noalias() += b[k] * (y[n - k] - y[n - k - 1]);
        d[n] = scale * acc;
    }
    return d;
}

std::vector<double> caputo_l1_left(std::span<const double> values, double step, double alpha) {
    require_caputo_order(alpha);
    if (values.size() < 2) throw InvalidArgument("caputo_l1_left: need at least two samples");
    const std::size_t N = values.size() - 1;
    const double scale = std::pow(step, -alpha) / gamma_fn(2.0 - alpha);
    const auto b = l1_coefficients(N, alpha);
    std::vector<double> d(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += b[k] * (values[n - k] - values[n - k - 1]);
        d[n] = scale * acc;
    }
    return d;
}

std::vector<double> caputo_l1_right(std::span<const double> values, double step, double alpha) {
    require_caputo_order(alpha);
    if (values.size() < 2) throw InvalidArgument("caputo_l1_right: need at least two samples");
    const std::size_t N = values.size() - 1;
    const double scale = std::pow(step, -alpha) / gamma_fn(2.0 - alpha);
    const auto b = l1_coefficients(N, alpha);
    std::vector<double> d(N + 1, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; n + k < N; ++k) {
            acc += b[k] * (values[n + k + 1] - values[n + k]);
        }
        d[n] = -scale * acc;
    }
    return d;
}

double fdde_residual(const FddeProblem& problem, const Trajectory& y, const ControlSignal& u) {
    const Grid& grid = y.grid();
    grid.require_problem(problem.horizon, problem.delay);
    check_same_grid(u.grid(), grid, "fdde_residual");
    const auto d = caputo_l1_derivative(y, problem.alpha);
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    double worst = 0.0;
    for (std::size_t j = 1; j < grid.node_count(); ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        const Vec f = problem.f(grid.time(jj), y.node(jj), y.node(jj - m), u.node(j));
        worst = std::max(worst, (d[j] - f).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

double IntegrationByParts::relative_difference() const {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

namespace {

// int_0^{t_N} phi(t) t^{-alpha} dt for the piecewise-linear interpolant of phi.
double weakly_singular_moment(std::span<const double> phi, double step, double alpha) {
    const std::size_t N = phi.size() - 1;
    const double p0 = 1.0 - alpha;
    const double p1 = 2.0 - alpha;
    double sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double a = static_cast<double>(j) * step;
        const double b = a + step;
        const double m0 = (std::pow(b, p0) - std::pow(a, p0)) / p0;  // int s^{-alpha}
        const double m1 = (std::pow(b, p1) - std::pow(a, p1)) / p1;  // int s^{1-alpha}
        sum += (phi[j] * (b * m0 - m1) + phi[j + 1] * (m1 - a * m0)) / step;
    }
    return sum;
}

double trapezoid(const std::vector<double>& v, double step) {
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t k = 1; k + 1 < v.size(); ++k) s += v[k];
    return s * step;
}

}  // namespace

IntegrationByParts fractional_integration_by_parts(std::span<const double> f,
                                                   std::span<const double> g, double step,
                                                   double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("fractional_integration_by_parts: alpha must lie in (0, 1)");
    }
    if (f.size() != g.size() || f.size() < 3) {
        throw InvalidArgument("fractional_integration_by_parts: need equal sample counts >= 3");
    }
    const std::size_t N = f.size() - 1;
    const double inv_g1 = 1.0 / gamma_fn(1.0 - alpha);

    auto dg = caputo_l1_left(g, step, alpha);
    dg[0] = dg[1];
    auto df = caputo_l1_right(f, step, alpha);
    df[N] = df[N - 1];

    std::vector<double> left(N + 1), right(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        left[k] = f[k] * dg[k];
        right[k] = g[k] * df[k];
    }
    IntegrationByParts out;
    out.lhs = trapezoid(left, step) + g.front() * inv_g1 * weakly_singular_moment(f, step, alpha);
    std::vector<double> g_reversed(g.rbegin(), g.rend());
    out.rhs = trapezoid(right, step) +
              f.back() * inv_g1 * weakly_singular_moment(g_reversed, step, alpha);
    return out;
}

}  // namespace fracpmp
