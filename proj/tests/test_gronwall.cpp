#include <doctest.h>

#include <random>

#include "fracpmp/gronwall.hpp"
#include "fracpmp/volterra.hpp"

using namespace fracpmp;

namespace {

GronwallData constant_data(const Grid& g, double a, double L, double alpha) {
    return {std::vector<double>(g.node_count() + 1, a), std::vector<double>(g.node_count() + 1, L), alpha,
            g.delay_index()};
}

}  // namespace

TEST_CASE("trivial bounds") {
    const Grid g = Grid::make(1.0, 0.5, 32);
    GronwallData d = constant_data(g, 0.7, 0.0, 0.5);
    for (double b : picard_bound(d, g)) CHECK(b == 0.7);
    d = constant_data(g, 0.0, 2.0, 0.5);
    for (double b : picard_bound(d, g)) CHECK(b == 0.0);
}

TEST_CASE("bound is a fixed point and dominates the inequality") {
    const Grid g = Grid::make(1.0, 0.5, 256);
    const GronwallData d = constant_data(g, 1.0, 1.0, 0.5);
    const auto b = picard_bound(d, g);
    const auto phi = gronwall_operator(d, g, b);
    for (std::size_t n = 0; n < b.size(); ++n) {
        CHECK(std::abs(phi[n] - b[n]) <= 1e-12 * std::max(1.0, b[n]));
        CHECK(b[n] >= d.a[n]);
    }
    // any sequence satisfying the inequality stays below the bound
    std::vector<double> y(b.size());
    for (std::size_t n = 0; n < y.size(); ++n) y[n] = 0.5 * b[n];
    const auto rhs = gronwall_operator(d, g, y);
    for (std::size_t n = 0; n < y.size(); ++n) CHECK(y[n] <= rhs[n] + 1e-12);
}

TEST_CASE("no delay contribution before the delay") {
    // on [0, h] the delayed term vanishes: y = 1 + int (t-s)^{alpha-1} y, whose
    // least solution grows like Mittag-Leffler; at least 1 + 2 sqrt(t) here
    const Grid g = Grid::make(1.0, 0.5, 128);
    const GronwallData d = constant_data(g, 1.0, 1.0, 0.5);
    const auto b = picard_bound(d, g);
    const SingularWeights w(g, 0.5);
    for (std::size_t n = 1; n <= g.delay_index(); ++n) CHECK(b[n] >= 1.0 + w.row_sum(n) - 1e-12);
}

TEST_CASE("bound is monotone in the data") {
    const Grid g = Grid::make(2.0, 0.5, 64);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    GronwallData lo = constant_data(g, 0, 0, 0.4);
    for (std::size_t n = 0; n <= g.node_count(); ++n) {
        lo.a[n] = u(rng);
        lo.L[n] = u(rng);
    }
    GronwallData hi = lo;
    for (std::size_t n = 0; n <= g.node_count(); ++n) {
        hi.a[n] += 0.1 * u(rng);
        hi.L[n] += 0.1 * u(rng);
    }
    const auto bl = picard_bound(lo, g);
    const auto bh = picard_bound(hi, g);
    for (std::size_t n = 0; n < bl.size(); ++n) CHECK(bl[n] <= bh[n]);
}

TEST_CASE("invalid data") {
    const Grid g = Grid::make(1.0, 0.5, 16);
    GronwallData d = constant_data(g, 1.0, 1.0, 0.5);
    d.a[3] = -1e-3;
    CHECK_THROWS_AS(picard_bound(d, g), InvalidArgument);
    d = constant_data(g, 1.0, 1.0, 0.5);
    d.L.pop_back();
    CHECK_THROWS_AS(picard_bound(d, g), InvalidArgument);
    d = constant_data(g, 1.0, 1.0, 0.5);
    d.delay_index = 5;
    CHECK_THROWS_AS(picard_bound(d, g), GridMismatch);
}

TEST_CASE("huge coefficients diverge") {
    const Grid g = Grid::make(4.0, 0.5, 64);
    const GronwallData d = constant_data(g, 1.0, 1e3, 0.5);
    CHECK_THROWS_AS(picard_bound(d, g), Divergence);
}
