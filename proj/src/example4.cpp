#include "fracpmp/example4.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "fracpmp/csv.hpp"
#include "fracpmp/specfun.hpp"

namespace fracpmp {

namespace {

constexpr double kAlpha = 0.5;
constexpr double kDelay = 0.5;
constexpr double kHorizon = 2.0;
constexpr double kMatchTol = 5e-3;
constexpr int kCandidates = 64;

Mat delay_matrix() {
    Mat A(2, 2);
    A << 0, 1, 0, 0;
    return A;
}

Vec two(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec closed_form_lambda(double t) {
    const double s = std::sqrt(t) / gamma_fn(1.5);
    return two((t - 0.5) - s, s);
}

ControlSignal step_control(const Grid& grid, double tau, const ControlSet& U) {
    std::vector<Vec> u;
    for (std::size_t j = 0; j <= grid.node_count(); ++j) {
        u.push_back(Vec::Constant(1, grid.time(static_cast<std::ptrdiff_t>(j)) < tau ? 1.0 : 0.0));
    }
    return ControlSignal(grid, std::move(u), U);
}

double sup_diff(const std::vector<Vec>& a, const std::vector<Vec>& b, Eigen::Index comp = -1) {
    double out = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Vec d = a[j] - b[j];
        out = std::max(out, comp < 0 ? d.lpNorm<Eigen::Infinity>() : std::abs(d[comp]));
    }
    return out;
}

}  // namespace

LinearProblemConfig example4_config(std::size_t nodes_per_delay) {
    LinearProblemConfig c;
    c.kind = ProblemKind::Fdde;
    c.alpha = kAlpha;
    c.delay = kDelay;
    c.horizon = kHorizon;
    c.nodes_per_delay = nodes_per_delay;
    c.state_dim = 2;
    c.control_dim = 1;
    c.a_state = Mat::Zero(2, 2);
    c.a_delay = delay_matrix();
    c.b_control = Mat(two(-1, -1));
    c.c_y = RowVec::Zero(2);
    c.c_yh = two(1, -1).transpose();
    c.cost_kind = ControlCostKind::Linear;
    c.linear_weight = RowVec::Ones(1);
    c.control_set = ControlSet::box(Vec::Zero(1), Vec::Ones(1));
    return c;
}

double bang_fraction(const ControlSignal& u) {
    std::size_t bang = 0;
    for (const Vec& v : u.values()) {
        const double x = v[0];
        if (std::min(std::abs(x), std::abs(x - 1.0)) <= 1e-3) ++bang;
    }
    return static_cast<double>(bang) / static_cast<double>(u.values().size());
}

int switch_count(const ControlSignal& u) {
    int count = 0;
    const auto& v = u.values();
    for (std::size_t j = 1; j < v.size(); ++j) {
        if ((v[j - 1][0] > 0.5) != (v[j][0] > 0.5)) ++count;
    }
    return count;
}

std::string Example4Report::to_json() const {
    nlohmann::ordered_json doc;
    doc["nodes_per_delay"] = nodes_per_delay;
    doc["node_count"] = node_count;
    doc["switch_time"] = switch_time < 0.0 ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(switch_time);
    doc["switch_count"] = switch_count;
    doc["J_best"] = J_best;
    doc["best_switch_tau"] = best_tau;
    doc["J_sweep"] = J_sweep;
    doc["residual_max"] = residual_max;
    doc["residual_l1"] = residual_l1;
    doc["bang_fraction"] = bang_fraction;
    doc["sweep_converged"] = sweep_converged;
    doc["iterations"] = iterations;
    doc["lambda_convention_match"] = lambda_convention_match;
    doc["lambda1_reproduced"] = lambda1_reproduced;
    doc["lambda2_reproduced"] = lambda2_reproduced;
    doc["adjoint_sup_diff_shifted"] = adjoint_sup_diff_shifted;
    doc["adjoint_sup_diff_as_displayed"] = adjoint_sup_diff_as_displayed;
    auto conv = nlohmann::ordered_json::array();
    for (const auto& c : lambda_conventions) {
        conv.push_back({{"name", c.name},
                        {"series_sup_diff", c.series_sup_diff},
                        {"closed_form_sup_diff_1", c.closed_form_sup_diff_1},
                        {"closed_form_sup_diff_2", c.closed_form_sup_diff_2}});
    }
    doc["lambda_conventions"] = conv;
    doc["J_switch_at_one"] = J_switch_at_one;
    doc["residual_switch_at_one"] = residual_switch_at_one;
    doc["state_formula_sup_diff"] = state_formula_sup_diff;
    return doc.dump(2) + "\n";
}

Example4Report run_example4(const std::string& out_dir, std::size_t nodes_per_delay,
                            const SweepParams& params) {
    const LinearProblemConfig config = example4_config(nodes_per_delay);
    const Problem problem = make_problem(config);
    const auto& fp = std::get<FddeProblem>(problem);
    const Grid grid = config.grid();
    const ControlSet& U = config.control_set;
    const std::size_t N = grid.node_count();
    const Mat A = delay_matrix();

    Example4Report rep;
    rep.nodes_per_delay = nodes_per_delay;
    rep.node_count = N;

    // Adjoint along u = 0 (the Jacobians are constant, so the adjoint does
    // not depend on the reference pair).
    const ControlSignal u_zero = ControlSignal::constant(grid, Vec::Zero(1), U);
    const Trajectory y_zero = solve_state(problem, u_zero, params);
    const AdjointTrajectory psi_shifted = solve_adjoint_fdde(
        fp, y_zero, u_zero, grid, {AdjointSourceConvention::ShiftedIndicator, params.adjoint_fdde});
    const AdjointTrajectory psi_displayed = solve_adjoint_fdde(
        fp, y_zero, u_zero, grid, {AdjointSourceConvention::AsDisplayed, params.adjoint_fdde});
    const Vec source = -config.c_yh.transpose();
    std::vector<Vec> series_shifted(N + 1), series_displayed(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        const double t = grid.time(static_cast<std::ptrdiff_t>(j));
        series_shifted[j] = delayed_power_series(A.transpose(), source, kAlpha, kDelay,
                                                 std::max(0.0, kHorizon - kDelay - t));
        series_displayed[j] = delayed_power_series(A.transpose(), source, kAlpha, kDelay,
                                                   kHorizon - t);
    }
    rep.adjoint_sup_diff_shifted = sup_diff(psi_shifted.values(), series_shifted);
    rep.adjoint_sup_diff_as_displayed = sup_diff(psi_displayed.values(), series_displayed);

    // The forward multiplier equation under three (matrix, source) readings.
    const std::vector<std::pair<std::string, std::pair<Mat, Vec>>> readings = {
        {"transpose_minus_ones", {A.transpose(), two(-1, -1)}},
        {"plain_minus_one_one", {A, two(-1, 1)}},
        {"transpose_minus_one_one", {A.transpose(), two(-1, 1)}},
    };
    std::vector<std::vector<Vec>> lambda_numeric;
    std::vector<Vec> lambda_closed(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        lambda_closed[j] = closed_form_lambda(grid.time(static_cast<std::ptrdiff_t>(j)));
    }
    for (const auto& [name, mw] : readings) {
        const Mat M = mw.first;
        const Vec W = mw.second;
        const detail::NodeRhs rhs = [&](std::size_t, const Vec&, const Vec& yd) -> Vec {
            return M * yd + W;
        };
        auto lam = detail::march_caputo(grid, kAlpha, Vec::Zero(2), {}, rhs, params.adjoint_fdde);
        std::vector<Vec> series(N + 1);
        for (std::size_t j = 0; j <= N; ++j) {
            series[j] = delayed_power_series(M, W, kAlpha, kDelay,
                                             grid.time(static_cast<std::ptrdiff_t>(j)));
        }
        LambdaConvention c{name, M, W, sup_diff(lam, series), sup_diff(lam, lambda_closed, 0),
                           sup_diff(lam, lambda_closed, 1)};
        if (rep.lambda_convention_match.empty() && c.closed_form_sup_diff_2 <= kMatchTol) {
            rep.lambda_convention_match = name;
            rep.lambda2_reproduced = true;
            rep.lambda1_reproduced = c.closed_form_sup_diff_1 <= kMatchTol;
        }
        rep.lambda_conventions.push_back(std::move(c));
        lambda_numeric.push_back(std::move(lam));
    }

    // Brute-force single-switch scan.
    std::vector<std::vector<double>> candidate_rows;
    rep.J_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kCandidates; ++k) {
        const double tau = k * kHorizon / (kCandidates - 1);
        const ControlSignal u = step_control(grid, tau, U);
        const double J = objective(problem, solve_state(problem, u, params), u);
        rep.candidate_tau.push_back(tau);
        rep.candidate_J.push_back(J);
        candidate_rows.push_back({tau, J});
        if (J < rep.J_best) {
            rep.J_best = J;
            rep.best_tau = tau;
        }
    }

    // Sweep from u0 = 0.5.
    const ControlSignal u0 = ControlSignal::constant(grid, Vec::Constant(1, 0.5), U);
    std::optional<SweepResult> sweep;
    try {
        sweep = forward_backward_sweep(problem, u0, params);
        rep.sweep_converged = true;
    } catch (const NotConverged& e) {
        sweep = e.last();
    }
    rep.iterations = sweep->iterations;
    rep.J_sweep = sweep->report.objective;
    rep.residual_max = sweep->report.max_residual;
    rep.residual_l1 = sweep->report.l1_residual;
    rep.bang_fraction = bang_fraction(sweep->u);
    rep.switch_count = switch_count(sweep->u);
    for (std::size_t j = 1; j <= N; ++j) {
        if ((sweep->u.node(j - 1)[0] > 0.5) != (sweep->u.node(j)[0] > 0.5)) {
            rep.switch_time = grid.time(static_cast<std::ptrdiff_t>(j));
            break;
        }
    }

    // The control that switches off at t = 1.
    {
        std::vector<Vec> v;
        for (std::size_t j = 0; j <= N; ++j) {
            v.push_back(Vec::Constant(1, grid.time(static_cast<std::ptrdiff_t>(j)) <= 1.0 ? 1.0 : 0.0));
        }
        const ControlSignal u1(grid, std::move(v), U);
        const Trajectory y1 = solve_state(problem, u1, params);
        const AdjointTrajectory psi1 = solve_costate(problem, y1, u1, params);
        const PmpReport r1 = pmp_residual(problem, y1, u1, psi1, params.argmax);
        rep.J_switch_at_one = r1.objective;
        rep.residual_switch_at_one = r1.max_residual;
        const Trajectory formula =
            linear_pure_delay_response(A, config.b_control, u1, kAlpha, kDelay, grid);
        rep.state_formula_sup_diff = sup_diff(y1.values(), formula.values());
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);

        std::vector<double> hamiltonian(N + 1);
        for (std::size_t j = 0; j <= N; ++j) {
            hamiltonian[j] = hamiltonian_fdde(sweep->psi, fp, sweep->y, j, sweep->u.node(j));
        }
        std::ostringstream traj;
        write_solution_csv(traj, sweep->y, sweep->u, &sweep->psi, hamiltonian,
                           sweep->report.residuals);
        write_file((dir / "trajectories.csv").string(), traj.str());

        std::vector<std::string> header = {"t", "psi1", "psi2", "series1", "series2",
                                           "closed_form1", "closed_form2"};
        for (const auto& c : rep.lambda_conventions) {
            header.push_back(c.name + "_1");
            header.push_back(c.name + "_2");
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j <= N; ++j) {
            std::vector<double> row = {grid.time(static_cast<std::ptrdiff_t>(j)),
                                       psi_shifted.values()[j][0], psi_shifted.values()[j][1],
                                       series_shifted[j][0], series_shifted[j][1],
                                       lambda_closed[j][0], lambda_closed[j][1]};
            for (const auto& lam : lambda_numeric) {
                row.push_back(lam[j][0]);
                row.push_back(lam[j][1]);
            }
            rows.push_back(std::move(row));
        }
        std::ostringstream adj;
        write_table_csv(adj, header, rows);
        write_file((dir / "adjoint.csv").string(), adj.str());

        std::ostringstream cand;
        write_table_csv(cand, {"tau", "J"}, candidate_rows);
        write_file((dir / "candidates.csv").string(), cand.str());

        write_file((dir / "report.json").string(), rep.to_json());
    }
    return rep;
}

}  // namespace fracpmp
