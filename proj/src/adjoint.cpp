#include "fracpmp/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "fracpmp/volterra.hpp"

namespace fracpmp {

namespace {

void require_inputs(const Grid& grid, double horizon, double delay, const Trajectory& y,
                    const ControlSignal& u, const char* what) {
    grid.require_problem(horizon, delay);
    if (!y.grid().same_as(grid) || !u.grid().same_as(grid)) {
        throw GridMismatch(std::string(what) + ": trajectory or control on a different grid");
    }
}

}  // namespace

AdjointTrajectory solve_adjoint_fdde(const FddeProblem& problem, const Trajectory& y_star,
                                     const ControlSignal& u_star, const Grid& grid,
                                     const AdjointOptions& opts) {
    problem.validate();
    require_inputs(grid, problem.horizon, problem.delay, y_star, u_star, "solve_adjoint_fdde");
    const std::size_t N = grid.node_count();
    const std::size_t m = grid.delay_index();
    const auto n_state = static_cast<Eigen::Index>(problem.state_dim);
    const auto sm = static_cast<std::ptrdiff_t>(m);

    // Coefficients at original node i: source, f_y(i)^T and the advanced
    // f_yh(i+m)^T (zero once i+m leaves the horizon).
    std::vector<Vec> source(N + 1);
    std::vector<Mat> jac(N + 1), jac_adv(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double t = grid.time(ii);
        const Vec& y = y_star.node(ii);
        const Vec& yd = y_star.node(ii - sm);
        const Vec& u = u_star.node(i);
        source[i] = -problem.g_y(t, y, yd, u).transpose();
        jac[i] = problem.f_y(t, y, yd, u).transpose();
        if (opts.convention == AdjointSourceConvention::AsDisplayed) {
            source[i] -= problem.g_yh(t, y, yd, u).transpose();
        }
        if (i + m <= N) {
            const double ta = grid.time(ii + sm);
            const Vec& ya = y_star.node(ii + sm);
            const Vec& ua = u_star.node(i + m);
            jac_adv[i] = problem.f_yh(ta, ya, y, ua).transpose();
            if (opts.convention == AdjointSourceConvention::ShiftedIndicator) {
                source[i] -= problem.g_yh(ta, ya, y, ua).transpose();
            }
        } else {
            jac_adv[i] = Mat::Zero(n_state, n_state);
        }
    }

    // reversed node k <-> original node N - k; the reversed delay value
    // phi_{k-m} is psi_{i+m}
    const auto rhs = [&](std::size_t k, const Vec& phi, const Vec& phi_delayed) -> Vec {
        const std::size_t i = N - k;
        return source[i] + jac[i] * phi + jac_adv[i] * phi_delayed;
    };
    auto phi =
        detail::march_caputo(grid, problem.alpha, Vec::Zero(n_state), {}, rhs, opts.solver);
    std::reverse(phi.begin(), phi.end());
    return AdjointTrajectory(grid, std::move(phi));
}

AdjointTrajectory solve_adjoint_vide(const VideProblem& problem, const Trajectory& y_star,
                                     const ControlSignal& u_star, const Grid& grid,
                                     AdjointSourceConvention convention) {
    problem.validate();
    require_inputs(grid, problem.horizon, problem.delay, y_star, u_star, "solve_adjoint_vide");
    const std::size_t N = grid.node_count();
    const std::size_t m = grid.delay_index();
    const auto sm = static_cast<std::ptrdiff_t>(m);
    const auto n_state = static_cast<Eigen::Index>(problem.state_dim);
    const SingularWeights w(grid, problem.alpha);

    std::vector<Vec> psi(N + 1, Vec::Zero(n_state));
    for (std::size_t jj = N + 1; jj-- > 0;) {
        const auto j = static_cast<std::ptrdiff_t>(jj);
        const double s = grid.time(j);
        const Vec& y = y_star.node(j);
        const Vec& yd = y_star.node(j - sm);
        const Vec& u = u_star.node(jj);

        Vec acc = -problem.g_y(s, y, yd, u).transpose();
        if (convention == AdjointSourceConvention::AsDisplayed) {
            acc -= problem.g_yh(s, y, yd, u).transpose();
        } else if (jj + m <= N) {
            acc -= problem.g_yh(grid.time(j + sm), y_star.node(j + sm), y, u_star.node(jj + m))
                       .transpose();
        }
        for (std::size_t i = jj + 1; i <= N; ++i) {
            const double ti = grid.time(static_cast<std::ptrdiff_t>(i));
            acc.noalias() += w.lag(i - jj - 1) * (problem.f_y(ti, s, y, yd, u).transpose() * psi[i]);
        }
        if (jj + m < N) {
            const double sa = grid.time(j + sm);
            const Vec& ya = y_star.node(j + sm);
            const Vec& ua = u_star.node(jj + m);
            for (std::size_t i = jj + m + 1; i <= N; ++i) {
                const double ti = grid.time(static_cast<std::ptrdiff_t>(i));
                acc.noalias() +=
                    w.lag(i - jj - m - 1) * (problem.f_yh(ti, sa, ya, y, ua).transpose() * psi[i]);
            }
        }
        const double mag = acc.lpNorm<Eigen::Infinity>();
        if (!(mag <= kBlowupThreshold)) {
            throw NumericalBlowup(jj, s, mag);
        }
        psi[jj] = std::move(acc);
    }
    return AdjointTrajectory(grid, std::move(psi));
}

DualityGap duality_gap(const FddeProblem& problem, const Trajectory& y_star,
                       const ControlSignal& u_star, const ControlSignal& u, const Trajectory& Y,
                       const AdjointTrajectory& psi) {
    const Grid& grid = y_star.grid();
    require_inputs(grid, problem.horizon, problem.delay, Y, u, "duality_gap");
    if (!u_star.grid().same_as(grid) || !psi.grid().same_as(grid)) {
        throw GridMismatch("duality_gap: inputs live on different grids");
    }
    const std::size_t N = grid.node_count();
    const std::size_t m = grid.delay_index();
    const auto sm = static_cast<std::ptrdiff_t>(m);

    double state_side = 0.0;
    double adjoint_side = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
        const double weight = (i == 0 || i == N) ? 0.5 : 1.0;
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double t = grid.time(ii);
        const Vec& y = y_star.node(ii);
        const Vec& yd = y_star.node(ii - sm);
        double a = problem.g_y(t, y, yd, u_star.node(i)).dot(Y.node(ii));
        if (i + m <= N) {
            a += problem.g_yh(grid.time(ii + sm), y_star.node(ii + sm), y, u_star.node(i + m))
                     .dot(Y.node(ii));
        }
        const Vec f_hat = problem.f(t, y, yd, u.node(i)) - problem.f(t, y, yd, u_star.node(i));
        state_side += weight * a;
        adjoint_side += weight * psi.node(ii).dot(f_hat);
    }
    DualityGap out;
    out.state_side = state_side * grid.step();
    out.adjoint_side = adjoint_side * grid.step();
    out.gap = std::abs(out.state_side + out.adjoint_side);
    const double scale = std::max(std::abs(out.state_side), std::abs(out.adjoint_side));
    out.relative = scale == 0.0 ? 0.0 : out.gap / scale;
    return out;
}

}  // namespace fracpmp
