#include "fracpmp/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace fracpmp {

void SweepParams::validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("sweep: beta must lie in (0, 1]");
    if (!(tol > 0.0)) throw InvalidArgument("sweep: tol must be positive");
    if (max_iter < 1) throw InvalidArgument("sweep: max_iter must be at least 1");
    if (argmax.grid_points < 2) throw InvalidArgument("sweep: argmax grid needs >= 2 points");
    if (!(argmax.refine_tol > 0.0)) throw InvalidArgument("sweep: refine_tol must be positive");
}

namespace {

const Grid& grid_of(const Trajectory& y) { return y.grid(); }

template <class P>
double objective_impl(const P& problem, const Trajectory& y, const ControlSignal& u) {
    const Grid& grid = grid_of(y);
    grid.require_problem(problem.horizon, problem.delay);
    if (!u.grid().same_as(grid)) throw GridMismatch("objective: control on a different grid");
    const std::size_t N = grid.node_count();
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    double sum = 0.0;
    for (std::size_t j = 0; j <= N; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        const double v = problem.g(grid.time(jj), y.node(jj), y.node(jj - m), u.node(j));
        sum += (j == 0 || j == N) ? 0.5 * v : v;
    }
    return sum * grid.step();
}

// Maximize a unimodal-ish scalar function on [a, b] by golden sections.
double golden_section_max(const std::function<double(double)>& phi, double a, double b,
                          double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = phi(c);
    double fd = phi(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
        }
    }
    return 0.5 * (a + b);
}

Vec maximize_over_box(const std::function<double(const Vec&)>& H, const ControlSet::Box& box,
                      const ArgmaxOptions& opts) {
    const auto dim = box.lo.size();
    if (dim == 0) return Vec(0);
    const int pts = opts.grid_points;
    Vec step(dim);
    std::vector<int> count(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double width = box.hi[k] - box.lo[k];
        count[static_cast<std::size_t>(k)] = width > 0.0 ? pts : 1;
        step[k] = width > 0.0 ? width / (pts - 1) : 0.0;
    }
    const auto coord = [&](Eigen::Index k, int i) {
        // last point pinned to hi so the vertex is hit exactly
        return i == count[static_cast<std::size_t>(k)] - 1 ? box.hi[k] : box.lo[k] + i * step[k];
    };

    // odometer over the grid with the first coordinate most significant,
    // which visits points in lexicographic order
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    Vec cur(dim);
    Vec best;
    double best_val = -std::numeric_limits<double>::infinity();
    while (true) {
        for (Eigen::Index k = 0; k < dim; ++k) cur[k] = coord(k, idx[static_cast<std::size_t>(k)]);
        const double v = H(cur);
        if (v > best_val || best.size() == 0) {
            best_val = v;
            best = cur;
        }
        Eigen::Index k = dim - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == count[static_cast<std::size_t>(k)]) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }

    for (Eigen::Index k = 0; k < dim; ++k) {
        if (step[k] == 0.0) continue;
        const double a = std::max(box.lo[k], best[k] - step[k]);
        const double b = std::min(box.hi[k], best[k] + step[k]);
        Vec probe = best;
        const auto phi = [&](double z) {
            probe[k] = z;
            return H(probe);
        };
        const double z = golden_section_max(phi, a, b, opts.refine_tol);
        probe[k] = z;
        const double v = H(probe);
        if (v > best_val) {
            best_val = v;
            best = probe;
        }
    }
    return best;
}

}  // namespace

double objective(const Problem& problem, const Trajectory& y, const ControlSignal& u) {
    return std::visit([&](const auto& p) { return objective_impl(p, y, u); }, problem);
}

double hamiltonian_fdde(const AdjointTrajectory& psi, const FddeProblem& problem,
                        const Trajectory& y_star, std::size_t node, const Vec& u) {
    const Grid& grid = y_star.grid();
    const auto j = static_cast<std::ptrdiff_t>(node);
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    const double t = grid.time(j);
    const Vec& y = y_star.node(j);
    const Vec& yd = y_star.node(j - m);
    return psi.node(j).dot(problem.f(t, y, yd, u)) - problem.g(t, y, yd, u);
}

double hamiltonian_vide(const AdjointTrajectory& psi, const VideProblem& problem,
                        const Trajectory& y_star, std::size_t node, const Vec& u,
                        const SingularWeights& weights) {
    const Grid& grid = y_star.grid();
    const std::size_t N = grid.node_count();
    const auto j = static_cast<std::ptrdiff_t>(node);
    const auto m = static_cast<std::ptrdiff_t>(grid.delay_index());
    const double s = grid.time(j);
    const Vec& y = y_star.node(j);
    const Vec& yd = y_star.node(j - m);
    double integral = 0.0;
    for (std::size_t i = node + 1; i <= N; ++i) {
        const double ti = grid.time(static_cast<std::ptrdiff_t>(i));
        integral += weights.lag(i - node - 1) * psi.node(static_cast<std::ptrdiff_t>(i))
                                                     .dot(problem.f(ti, s, y, yd, u));
    }
    return integral - problem.g(s, y, yd, u);
}

Vec maximize_hamiltonian(const std::function<double(const Vec&)>& H, const ControlSet& U,
                         const ArgmaxOptions& opts) {
    if (const auto* finite = U.as_finite()) {
        const auto& pts = finite->points;
        std::size_t best = 0;
        double best_val = H(pts[0]);
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const double v = H(pts[k]);
            if (v > best_val) {
                best_val = v;
                best = k;
            }
        }
        return pts[best];
    }
    return maximize_over_box(H, *U.as_box(), opts);
}

namespace {

// Pointwise Hamiltonian at node j as a function of the control.
std::function<double(const Vec&)> node_hamiltonian(const Problem& problem,
                                                   const AdjointTrajectory& psi,
                                                   const Trajectory& y, std::size_t j,
                                                   const SingularWeights* weights) {
    if (const auto* fp = std::get_if<FddeProblem>(&problem)) {
        return [fp, &psi, &y, j](const Vec& u) { return hamiltonian_fdde(psi, *fp, y, j, u); };
    }
    const auto* vp = std::get_if<VideProblem>(&problem);
    return [vp, &psi, &y, j, weights](const Vec& u) {
        return hamiltonian_vide(psi, *vp, y, j, u, *weights);
    };
}

std::optional<SingularWeights> weights_for(const Problem& problem, const Grid& grid) {
    if (const auto* vp = std::get_if<VideProblem>(&problem)) {
        return SingularWeights(grid, vp->alpha);
    }
    return std::nullopt;
}

const SingularWeights* ptr(const std::optional<SingularWeights>& w) {
    return w ? &*w : nullptr;
}

}  // namespace

PmpReport pmp_residual(const Problem& problem, const Trajectory& y_star,
                       const ControlSignal& u_star, const AdjointTrajectory& psi,
                       const ArgmaxOptions& opts) {
    const Grid& grid = y_star.grid();
    grid.require_problem(horizon_of(problem), delay_of(problem));
    if (!u_star.grid().same_as(grid) || !psi.grid().same_as(grid)) {
        throw GridMismatch("pmp_residual: inputs live on different grids");
    }
    const ControlSet& U = controls_of(problem);
    const auto weights = weights_for(problem, grid);
    const std::size_t N = grid.node_count();

    PmpReport report;
    report.residuals.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        const auto H = node_hamiltonian(problem, psi, y_star, j, ptr(weights));
        const double at_candidate = H(u_star.node(j));
        const double at_argmax = H(maximize_hamiltonian(H, U, opts));
        // the candidate itself is admissible, so the max dominates it
        report.residuals[j] = std::max(at_argmax, at_candidate) - at_candidate;
    }
    report.max_residual = *std::max_element(report.residuals.begin(), report.residuals.end());
    double l1 = 0.5 * (report.residuals.front() + report.residuals.back());
    for (std::size_t j = 1; j < N; ++j) l1 += report.residuals[j];
    report.l1_residual = l1 * grid.step();
    report.objective = objective(problem, y_star, u_star);
    return report;
}

Trajectory solve_state(const Problem& problem, const ControlSignal& u, const SweepParams& params) {
    if (const auto* fp = std::get_if<FddeProblem>(&problem)) {
        return solve_fdde(*fp, u, u.grid(), params.fdde);
    }
    return solve_vide(std::get<VideProblem>(problem), u, u.grid(), params.vide);
}

AdjointTrajectory solve_costate(const Problem& problem, const Trajectory& y,
                                const ControlSignal& u, const SweepParams& params) {
    if (const auto* fp = std::get_if<FddeProblem>(&problem)) {
        return solve_adjoint_fdde(*fp, y, u, y.grid(), AdjointOptions{params.convention, params.adjoint_fdde});
    }
    return solve_adjoint_vide(std::get<VideProblem>(problem), y, u, y.grid(), params.convention);
}

SweepResult forward_backward_sweep(const Problem& problem, const ControlSignal& u0,
                                   const SweepParams& params) {
    params.validate();
    const ControlSet& U = controls_of(problem);
    const Grid& grid = u0.grid();
    grid.require_problem(horizon_of(problem), delay_of(problem));
    const std::size_t N = grid.node_count();
    const auto weights = weights_for(problem, grid);
    const bool finite = U.as_finite() != nullptr;

    std::vector<Vec> u = u0.values();
    std::vector<double> changes;
    for (int iter = 1; iter <= params.max_iter; ++iter) {
        const ControlSignal uk(grid, u, U);
        const Trajectory y = solve_state(problem, uk, params);
        const AdjointTrajectory psi = solve_costate(problem, y, uk, params);

        std::vector<Vec> next(N + 1);
        double change = 0.0;
        for (std::size_t j = 0; j <= N; ++j) {
            const auto H = node_hamiltonian(problem, psi, y, j, ptr(weights));
            Vec best = maximize_hamiltonian(H, U, params.argmax);
            if (!(H(best) > H(u[j]))) best = u[j];
            next[j] = finite ? best : U.project((1.0 - params.beta) * u[j] + params.beta * best);
            change = std::max(change, ControlSet::distance(next[j], u[j]));
        }
        u = std::move(next);
        changes.push_back(change);

        const bool done = change <= params.tol;
        if (done || iter == params.max_iter) {
            ControlSignal final_u(grid, u, U);
            Trajectory final_y = solve_state(problem, final_u, params);
            AdjointTrajectory final_psi = solve_costate(problem, final_y, final_u, params);
            PmpReport report = pmp_residual(problem, final_y, final_u, final_psi, params.argmax);
            auto result = std::make_shared<SweepResult>(
                SweepResult{std::move(final_y), std::move(final_u), std::move(final_psi),
                            std::move(report), iter, changes});
            if (!done) throw NotConverged(std::move(result));
            return std::move(*result);
        }
    }
    throw InvalidArgument("sweep: unreachable");
}

GateauxCheck gateaux_check(const Problem& problem, const ControlSignal& u,
                           const std::vector<Vec>& direction, double eps,
                           const SweepParams& params) {
    const ControlSet& U = controls_of(problem);
    if (!U.as_box()) throw InvalidArgument("gateaux_check: requires a Box control set");
    if (!(eps > 0.0)) throw InvalidArgument("gateaux_check: eps must be positive");
    const Grid& grid = u.grid();
    const std::size_t N = grid.node_count();
    if (direction.size() != N + 1) {
        throw InvalidArgument("gateaux_check: direction needs N+1 node values");
    }
    std::vector<Vec> plus(N + 1), minus(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        plus[j] = u.node(j) + eps * direction[j];
        minus[j] = u.node(j) - eps * direction[j];
        if (!U.contains(plus[j]) || !U.contains(minus[j])) {
            throw InadmissibleDirection("gateaux_check: u +- eps*du leaves U at node " +
                                        std::to_string(j));
        }
    }

    const Trajectory y = solve_state(problem, u, params);
    const AdjointTrajectory psi = solve_costate(problem, y, u, params);
    const auto weights = weights_for(problem, grid);
    constexpr double du = 1e-5;
    double integral = 0.0;
    for (std::size_t j = 0; j <= N; ++j) {
        const auto H = node_hamiltonian(problem, psi, y, j, ptr(weights));
        double slope = 0.0;
        for (Eigen::Index k = 0; k < direction[j].size(); ++k) {
            if (direction[j][k] == 0.0) continue;
            Vec up = u.node(j);
            Vec dn = u.node(j);
            up[k] += du;
            dn[k] -= du;
            slope += (H(up) - H(dn)) / (2.0 * du) * direction[j][k];
        }
        integral += (j == 0 || j == N) ? 0.5 * slope : slope;
    }

    GateauxCheck out;
    out.adjoint_estimate = -integral * grid.step();
    const ControlSignal up(grid, plus, U);
    const ControlSignal dn(grid, minus, U);
    const double j_plus = objective(problem, solve_state(problem, up, params), up);
    const double j_minus = objective(problem, solve_state(problem, dn, params), dn);
    out.fd_estimate = (j_plus - j_minus) / (2.0 * eps);
    const double scale = std::max(std::abs(out.adjoint_estimate), std::abs(out.fd_estimate));
    out.relative_error =
        scale == 0.0 ? 0.0 : std::abs(out.adjoint_estimate - out.fd_estimate) / scale;
    return out;
}

}  // namespace fracpmp
