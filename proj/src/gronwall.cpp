#include "fracpmp/gronwall.hpp"

#include <algorithm>
#include <cmath>

#include "fracpmp/volterra.hpp"

namespace fracpmp {

namespace {

void check(const GronwallData& data, const Grid& grid) {
    const std::size_t n = grid.node_count() + 1;
    if (data.a.size() != n || data.L.size() != n) {
        throw InvalidArgument("picard_bound: a and L need N+1 samples");
    }
    if (!(data.alpha > 0.0 && data.alpha <= 1.0)) {
        throw InvalidArgument("picard_bound: alpha must lie in (0, 1]");
    }
    if (data.delay_index != grid.delay_index()) {
        throw GridMismatch("picard_bound: delay index differs from the grid");
    }
    const auto negative = [](double v) { return !(v >= 0.0); };
    if (std::any_of(data.a.begin(), data.a.end(), negative) ||
        std::any_of(data.L.begin(), data.L.end(), negative)) {
        throw InvalidArgument("picard_bound: data must be nonnegative");
    }
}

std::vector<double> apply(const GronwallData& data, const SingularWeights& w,
                          const std::vector<double>& b) {
    const std::size_t n_nodes = b.size();
    const std::size_t m = data.delay_index;
    std::vector<double> out(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        double acc = data.a[n];
        for (std::size_t j = 0; j < n; ++j) {
            const double delayed = j >= m ? b[j - m] : 0.0;
            acc += w.weight(n, j) * data.L[j] * (b[j] + delayed);
        }
        out[n] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> gronwall_operator(const GronwallData& data, const Grid& grid,
                                      const std::vector<double>& b) {
    check(data, grid);
    if (b.size() != data.a.size()) throw InvalidArgument("gronwall_operator: size mismatch");
    return apply(data, SingularWeights(grid, data.alpha), b);
}

std::vector<double> picard_bound(const GronwallData& data, const Grid& grid) {
    check(data, grid);
    const SingularWeights w(grid, data.alpha);
    const std::size_t m = data.delay_index;
    std::vector<double> b = data.a;
    // Sweeps update in place (Gauss-Seidel order). The operator is strictly
    // lower triangular, so iterates rise monotonically from a towards the
    // least fixed point and never overshoot it.
    for (int sweep = 0; sweep < kGronwallMaxSweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t n = 0; n < b.size(); ++n) {
            double acc = data.a[n];
            for (std::size_t j = 0; j < n; ++j) {
                const double delayed = j >= m ? b[j - m] : 0.0;
                acc += w.weight(n, j) * data.L[j] * (b[j] + delayed);
            }
            if (!(acc <= 1e12)) {
                throw Divergence("picard_bound: iterate exceeded 1e12 at node " +
                                 std::to_string(n));
            }
            change = std::max(change, std::abs(acc - b[n]));
            b[n] = acc;
        }
        if (change <= kGronwallTol) break;
    }
    return b;
}

}  // namespace fracpmp
