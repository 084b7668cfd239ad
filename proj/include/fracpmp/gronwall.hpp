#pragma once

// Discrete dominating bound for the delayed weakly singular Gronwall
// inequality
//   y_n <= a_n + sum_{j<n} w_{n,j} L_j y_j + sum_{j<n} w_{n,j} L_j y_{j-m},
// with w the product-rectangle weights of SingularWeights and y_{j-m} = 0
// before the origin. The bound is the least fixed point of the right-hand
// side, reached by Picard iteration from a.

#include <cstddef>
#include <vector>

#include "fracpmp/core.hpp"

namespace fracpmp {

struct GronwallData {
    std::vector<double> a;  ///< a_j >= 0 on every node
    std::vector<double> L;  ///< L_j >= 0 on every node
    double alpha = 0.5;
    std::size_t delay_index = 0;
};

inline constexpr int kGronwallMaxSweeps = 200;
inline constexpr double kGronwallTol = 1e-12;

/// Throws InvalidArgument on negative or mis-sized data, GridMismatch if the
/// delay index disagrees with the grid, Divergence if an iterate exceeds 1e12.
std::vector<double> picard_bound(const GronwallData& data, const Grid& grid);

/// (Phi b)_n, the right-hand side of the inequality evaluated at b.
std::vector<double> gronwall_operator(const GronwallData& data, const Grid& grid,
                                      const std::vector<double>& b);

}  // namespace fracpmp
