// Command-line front end: solve, sweep and certify linear delay control
// problems described by a JSON config, and reproduce the worked example.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// non-convergence or I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracpmp/config.hpp"
#include "fracpmp/csv.hpp"
#include "fracpmp/example4.hpp"
#include "fracpmp/pmp.hpp"
#include "fracpmp/specfun.hpp"

using namespace fracpmp;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config;
    std::size_t nodes_per_delay = 0;  // 0 keeps the config value
    double tol = 1e-6;
    int max_iter = 500;
    double beta = 0.5;
    std::string out = "out";
    std::vector<double> control;
};

LinearProblemConfig load(const Common& c) {
    LinearProblemConfig cfg = load_config_file(c.config);
    if (c.nodes_per_delay > 0) cfg.nodes_per_delay = c.nodes_per_delay;
    try {
        (void)cfg.grid();
    } catch (const Error& e) {
        throw ConfigError("nodes_per_delay", e.what());
    }
    return cfg;
}

SweepParams sweep_params(const Common& c) {
    SweepParams p;
    p.tol = c.tol;
    p.max_iter = c.max_iter;
    p.beta = c.beta;
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("flags", e.what());
    }
    return p;
}

// Constant control from --control, else the box midpoint or first point.
ControlSignal initial_control(const Common& c, const LinearProblemConfig& cfg, const Grid& grid) {
    const ControlSet& U = cfg.control_set;
    Vec v;
    if (!c.control.empty()) {
        if (c.control.size() != cfg.control_dim) {
            throw ConfigError("--control", "expected " + std::to_string(cfg.control_dim) + " values");
        }
        v = Eigen::Map<const Vec>(c.control.data(), static_cast<Eigen::Index>(c.control.size()));
        if (!U.contains(v)) throw ConfigError("--control", "value outside the control set");
    } else if (const auto* box = U.as_box()) {
        v = 0.5 * (box->lo + box->hi);
    } else {
        v = U.as_finite()->points.front();
    }
    return ControlSignal::constant(grid, v, U);
}

std::vector<double> hamiltonian_column(const Problem& problem, const Trajectory& y,
                                       const ControlSignal& u, const AdjointTrajectory& psi) {
    const std::size_t N = y.grid().node_count();
    std::vector<double> out(N + 1);
    if (const auto* fp = std::get_if<FddeProblem>(&problem)) {
        for (std::size_t j = 0; j <= N; ++j) out[j] = hamiltonian_fdde(psi, *fp, y, j, u.node(j));
    } else {
        const auto& vp = std::get<VideProblem>(problem);
        const SingularWeights w(y.grid(), vp.alpha);
        for (std::size_t j = 0; j <= N; ++j) out[j] = hamiltonian_vide(psi, vp, y, j, u.node(j), w);
    }
    return out;
}

void write_solution(const fs::path& dir, const Problem& problem, const Trajectory& y,
                    const ControlSignal& u, const AdjointTrajectory& psi,
                    const std::vector<double>& residuals) {
    fs::create_directories(dir);
    std::ostringstream ss;
    write_solution_csv(ss, y, u, &psi, hamiltonian_column(problem, y, u, psi), residuals);
    write_file((dir / "solution.csv").string(), ss.str());
}

void write_report(const fs::path& dir, const nlohmann::ordered_json& doc) {
    write_file((dir / "report.json").string(), doc.dump(2) + "\n");
}

nlohmann::ordered_json pmp_json(const PmpReport& r) {
    nlohmann::ordered_json doc;
    doc["objective"] = r.objective;
    doc["residual_max"] = r.max_residual;
    doc["residual_l1"] = r.l1_residual;
    return doc;
}

int run_solve(const Common& c, ProblemKind want) {
    const LinearProblemConfig cfg = load(c);
    if (cfg.kind != want) {
        throw ConfigError("kind", want == ProblemKind::Fdde ? "solve-fdde needs kind \"fdde\""
                                                            : "solve-vide needs kind \"vide\"");
    }
    const Problem problem = make_problem(cfg);
    const Grid grid = cfg.grid();
    const SweepParams params = sweep_params(c);
    const ControlSignal u = initial_control(c, cfg, grid);
    const Trajectory y = solve_state(problem, u, params);
    const AdjointTrajectory psi = solve_costate(problem, y, u, params);
    const PmpReport r = pmp_residual(problem, y, u, psi, params.argmax);
    write_solution(c.out, problem, y, u, psi, r.residuals);
    std::printf("J = %.10g\n", r.objective);
    return 0;
}

int run_check_pmp(const Common& c) {
    const LinearProblemConfig cfg = load(c);
    const Problem problem = make_problem(cfg);
    const Grid grid = cfg.grid();
    const SweepParams params = sweep_params(c);
    const ControlSignal u = initial_control(c, cfg, grid);
    const Trajectory y = solve_state(problem, u, params);
    const AdjointTrajectory psi = solve_costate(problem, y, u, params);
    const PmpReport r = pmp_residual(problem, y, u, psi, params.argmax);
    write_solution(c.out, problem, y, u, psi, r.residuals);
    write_report(c.out, pmp_json(r));
    std::printf("residual max = %.6g, L1 = %.6g, J = %.10g\n", r.max_residual, r.l1_residual,
                r.objective);
    return 0;
}

int run_sweep(const Common& c) {
    const LinearProblemConfig cfg = load(c);
    const Problem problem = make_problem(cfg);
    const Grid grid = cfg.grid();
    const SweepParams params = sweep_params(c);
    const ControlSignal u0 = initial_control(c, cfg, grid);

    std::optional<SweepResult> result;
    bool converged = true;
    try {
        result = forward_backward_sweep(problem, u0, params);
    } catch (const NotConverged& e) {
        result = e.last();
        converged = false;
    }
    write_solution(c.out, problem, result->y, result->u, result->psi, result->report.residuals);
    nlohmann::ordered_json doc = pmp_json(result->report);
    doc["converged"] = converged;
    doc["iterations"] = result->iterations;
    doc["control_change"] = result->control_change;
    write_report(c.out, doc);
    std::printf("%s after %d iterations: J = %.10g, residual max = %.6g\n",
                converged ? "converged" : "NOT converged", result->iterations,
                result->report.objective, result->report.max_residual);
    return converged ? 0 : kExitNumerical;
}

int run_kernels(const Common& c) {
    const LinearProblemConfig cfg = load(c);
    const Grid grid = cfg.grid();
    const Mat& A = cfg.a_delay;
    const auto n = A.rows();
    std::vector<std::string> header = {"tau"};
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k)
            header.push_back("G" + std::to_string(r + 1) + std::to_string(k + 1));
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k)
            header.push_back("X" + std::to_string(r + 1) + std::to_string(k + 1));
    std::vector<std::vector<double>> rows;
    // G is singular at tau = 0, so the table starts at the first node
    for (std::size_t j = 1; j <= grid.node_count(); ++j) {
        const double tau = grid.time(static_cast<std::ptrdiff_t>(j));
        const Mat G = delay_control_kernel(A, cfg.alpha, cfg.delay, tau);
        const Mat X = x_alpha_pure_delay_series(A, cfg.alpha, cfg.delay, tau);
        std::vector<double> row = {tau};
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index k = 0; k < n; ++k) row.push_back(G(r, k));
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index k = 0; k < n; ++k) row.push_back(X(r, k));
        rows.push_back(std::move(row));
    }
    fs::create_directories(c.out);
    std::ostringstream ss;
    write_table_csv(ss, header, rows);
    write_file((fs::path(c.out) / "kernels.csv").string(), ss.str());
    return 0;
}

int run_example(const Common& c) {
    SweepParams params = sweep_params(c);
    const std::size_t npd = c.nodes_per_delay > 0 ? c.nodes_per_delay : 128;
    const Example4Report r = run_example4(c.out, npd, params);
    std::printf("J_best = %.10g (switch at %.6g), sweep J = %.10g, switches = %d, residual max = %.3g\n",
                r.J_best, r.best_tau, r.J_sweep, r.switch_count, r.residual_max);
    std::printf("lambda convention match: %s\n",
                r.lambda_convention_match.empty() ? "none" : r.lambda_convention_match.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional delay optimal control toolkit"};
    app.require_subcommand(1);
    Common common;

    const auto add_common = [&common](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", common.config, "JSON problem description");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--nodes-per-delay", common.nodes_per_delay, "grid nodes per delay interval");
        sub->add_option("--tol", common.tol, "sweep stopping tolerance");
        sub->add_option("--max-iter", common.max_iter, "sweep iteration cap");
        sub->add_option("--beta", common.beta, "sweep relaxation in (0, 1]");
        sub->add_option("--out", common.out, "output directory");
    };
    const auto add_control = [&common](CLI::App* sub) {
        sub->add_option("--control", common.control, "constant control value(s)")->delimiter(',');
    };

    auto* solve_fdde_cmd = app.add_subcommand("solve-fdde", "solve the FDDE state and adjoint");
    add_common(solve_fdde_cmd, true);
    add_control(solve_fdde_cmd);
    auto* solve_vide_cmd = app.add_subcommand("solve-vide", "solve the Volterra state and adjoint");
    add_common(solve_vide_cmd, true);
    add_control(solve_vide_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "forward-backward sweep");
    add_common(sweep_cmd, true);
    add_control(sweep_cmd);
    auto* check_cmd = app.add_subcommand("check-pmp", "maximum-principle residual of a control");
    add_common(check_cmd, true);
    add_control(check_cmd);
    auto* example_cmd = app.add_subcommand("example4", "reproduce the worked pure-delay example");
    add_common(example_cmd, false);
    auto* kernels_cmd = app.add_subcommand("kernels", "tabulate G(tau) and X_alpha(tau)");
    add_common(kernels_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems (unknown flag, missing config file) count as config errors
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*solve_fdde_cmd) return run_solve(common, ProblemKind::Fdde);
        if (*solve_vide_cmd) return run_solve(common, ProblemKind::Vide);
        if (*sweep_cmd) return run_sweep(common);
        if (*check_cmd) return run_check_pmp(common);
        if (*example_cmd) return run_example(common);
        if (*kernels_cmd) return run_kernels(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
