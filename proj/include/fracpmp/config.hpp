#pragma once

// JSON configuration for the linear/affine problem family
//   f = A_state y + A_delay y_h + B_control u   (VIDE: same kernel, plus eta)
//   g = c_y y + c_yh y_h + control cost
// where the control cost is either r . u (linear) or q |u|^2 (quadratic).

#include <string>
#include <vector>

#include "fracpmp/core.hpp"

namespace fracpmp {

enum class ControlCostKind { Linear, Quadratic };

struct LinearProblemConfig {
    ProblemKind kind = ProblemKind::Fdde;
    double alpha = 0.5;
    double delay = 1.0;
    double horizon = 1.0;
    std::size_t nodes_per_delay = 64;
    std::size_t state_dim = 1;
    std::size_t control_dim = 1;
    Mat a_state;
    Mat a_delay;
    Mat b_control;
    RowVec c_y;
    RowVec c_yh;
    ControlCostKind cost_kind = ControlCostKind::Linear;
    RowVec linear_weight;         // length control_dim
    double quadratic_weight = 0;  // >= 0
    ControlSet control_set;
    /// eta_i(t) = sum_k eta[i][k] t^k; VIDE only.
    std::vector<std::vector<double>> eta;

    Grid grid() const { return Grid::make(horizon, delay, nodes_per_delay); }
};

/// Throws ConfigError(field path, reason).
LinearProblemConfig parse_config(const std::string& text);
LinearProblemConfig load_config_file(const std::string& path);

/// Canonical JSON; parse_config(to_json(c)) reproduces c.
std::string to_json(const LinearProblemConfig& config);

Problem make_problem(const LinearProblemConfig& config);

/// parse_config followed by make_problem.
Problem load_problem(const std::string& text);

/// Whether two configs describe the same problem (dimensions, matrices, set).
bool same_problem(const LinearProblemConfig& a, const LinearProblemConfig& b);

}  // namespace fracpmp
