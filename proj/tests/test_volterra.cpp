#include <doctest.h>

#include "fracpmp/fdde.hpp"
#include "fracpmp/volterra.hpp"
#include "oracles.hpp"
#include "problems.hpp"

using namespace fracpmp;
using testprob::linear_vide;
using testprob::zero_singleton;

TEST_CASE("singular weights") {
    const Grid g = Grid::make(1.0, 0.25, 16);
    const double d = g.step();
    for (double alpha : {0.2, 0.5, 0.9}) {
        const SingularWeights w(g, alpha);
        CHECK(w.weight(1, 0) == doctest::Approx(std::pow(d, alpha) / alpha).epsilon(1e-14));
        for (std::size_t n = 1; n <= g.node_count(); ++n) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(w.weight(n, j) >= 0.0);
                sum += w.weight(n, j);
            }
            const double tn = g.time(static_cast<std::ptrdiff_t>(n));
            CHECK(std::abs(sum - std::pow(tn, alpha) / alpha) <= 1e-12 * sum);
            CHECK(std::abs(w.row_sum(n) - sum) <= 1e-12 * sum);
        }
    }
    const SingularWeights one(g, 1.0);
    for (std::size_t k = 0; k < g.node_count(); ++k) CHECK(one.lag(k) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("hat weights integrate linear functions exactly") {
    const Grid g = Grid::make(1.0, 0.5, 20);
    const double alpha = 0.4;
    const SingularWeights w(g, alpha);
    for (std::size_t n : {1u, 2u, 7u, 40u}) {
        const double tn = g.time(static_cast<std::ptrdiff_t>(n));
        double sum0 = 0.0, sum1 = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            sum0 += w.hat_weight(n, j);
            sum1 += w.hat_weight(n, j) * g.time(static_cast<std::ptrdiff_t>(j));
        }
        CHECK(sum0 == doctest::Approx(oracle::kernel_moment(0, alpha, tn)).epsilon(1e-12));
        CHECK(sum1 == doctest::Approx(oracle::kernel_moment(1, alpha, tn)).epsilon(1e-12));
    }
}

TEST_CASE("zero kernel returns the free term") {
    const Grid g = Grid::make(1.0, 0.5, 16);
    const auto p = linear_vide(0, 0, [](double) { return 0.0; }, [](double t) { return std::cos(t); },
                               0, 0, zero_singleton(), 0.5, 1.0, 0.5);
    const auto u = ControlSignal::constant(g, Vec::Zero(1), p.controls);
    const Trajectory y = solve_vide(p, u, g);
    for (std::size_t j = 0; j <= g.node_count(); ++j) {
        CHECK(y.values()[j][0] == std::cos(g.time(static_cast<std::ptrdiff_t>(j))));
    }
}

TEST_CASE("constant kernel") {
    const Grid g = Grid::make(1.0, 0.5, 512);
    const auto p = linear_vide(0, 0, [](double) { return 1.0; }, [](double) { return 0.0; }, 0, 0,
                               zero_singleton(), 0.5, 1.0, 0.5);
    const auto u = ControlSignal::constant(g, Vec::Zero(1), p.controls);
    const Trajectory y = solve_vide(p, u, g);
    double err = 0.0;
    for (std::size_t j = 0; j <= g.node_count(); ++j) {
        err = std::max(err, std::abs(y.values()[j][0] - 2.0 * std::sqrt(g.time(static_cast<std::ptrdiff_t>(j)))));
    }
    CHECK(err <= 5e-3);
}

TEST_CASE("linear kernel agrees with Picard iteration") {
    // the solution reaches ~46 at t = 1, so the frozen left-endpoint rule is
    // only first order there; the refined rule meets 5e-3 on a finer grid
    const auto p = linear_vide(1.0, 0, [](double) { return 0.0; }, [](double) { return 1.0; }, 0, 0,
                               zero_singleton(), 0.5, 1.0, 1.0);
    const auto sup_err = [&](std::size_t n, bool refine) {
        const Grid g = Grid::make(1.0, 1.0, n);
        const auto u = ControlSignal::constant(g, Vec::Zero(1), p.controls);
        const Trajectory y = solve_vide(p, u, g, {refine});
        double err = 0.0;
        for (std::size_t j = 0; j <= g.node_count(); j += 8) {
            const double t = g.time(static_cast<std::ptrdiff_t>(j));
            err = std::max(err, std::abs(y.values()[j][0] - oracle::picard_series(1.0, 1.0, 0.5, t, 80)));
        }
        return err;
    };
    CHECK(sup_err(4096, true) <= 5e-3);
    const double e1 = sup_err(1024, false);
    const double e2 = sup_err(2048, false);
    CHECK(e2 <= 0.55 * e1);
}

TEST_CASE("piecewise-constant integrands are integrated exactly") {
    const Grid g = Grid::make(1.0, 0.25, 8);
    const double d = g.step(), alpha = 0.35;
    const auto cell_value = [d](double s) { return 1.0 + std::floor(s / d + 1e-9) * 0.5; };
    const auto p = linear_vide(0, 0, cell_value, [](double) { return 0.0; }, 0, 0, zero_singleton(),
                               alpha, 1.0, 0.25);
    const auto u = ControlSignal::constant(g, Vec::Zero(1), p.controls);
    const Trajectory y = solve_vide(p, u, g);
    for (std::size_t n = 1; n <= g.node_count(); ++n) {
        const double tn = n * d;
        double exact = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            exact += (1.0 + 0.5 * j) * (std::pow(tn - j * d, alpha) - std::pow(tn - (j + 1) * d, alpha)) / alpha;
        }
        CHECK(std::abs(y.values()[n][0] - exact) <= 1e-12 * exact);
    }
}

TEST_CASE("scaled kernel reproduces the FDDE solver") {
    const double alpha = 0.6, a = -0.8, b = 0.5;
    const Grid g = Grid::make(2.0, 0.5, 32);
    const auto forcing = [](double s) { return 1.0 + std::sin(3 * s); };
    const double gi = 1.0 / std::tgamma(alpha);
    const auto vp = linear_vide(a * gi, b * gi, [&](double s) { return gi * forcing(s); },
                                [](double) { return 0.0; }, 0, 0, zero_singleton(), alpha, 2.0, 0.5);
    FddeProblem fp = testprob::linear_fdde(testprob::mat1(a), testprob::mat1(b), testprob::mat1(0),
                                           testprob::row1(0), testprob::row1(0), testprob::row1(0), 0,
                                           zero_singleton(), alpha, 2.0, 0.5);
    fp.f = [a, b, forcing](double t, const Vec& y, const Vec& yh, const Vec&) -> Vec {
        return Vec::Constant(1, a * y[0] + b * yh[0] + forcing(t));
    };
    const auto u = ControlSignal::constant(g, Vec::Zero(1), fp.controls);
    const Trajectory yf = solve_fdde(fp, u, g, {FddeScheme::ProductRectangle, 0});
    const Trajectory yv = solve_vide(vp, u, g);
    CHECK(oracle::sup_diff(yf.values(), yv.values()) <= 1e-13);
}

TEST_CASE("larger free term gives larger solution") {
    const Grid g = Grid::make(1.0, 0.25, 64);
    const auto make = [](double c) {
        return linear_vide(0.7, 0.4, [](double) { return 0.0; }, [c](double t) { return c + t; }, 0, 0,
                           zero_singleton(), 0.5, 1.0, 0.25);
    };
    const auto u = ControlSignal::constant(g, Vec::Zero(1), zero_singleton());
    const Trajectory lo = solve_vide(make(1.0), u, g);
    const Trajectory hi = solve_vide(make(1.2), u, g);
    for (std::size_t j = 0; j <= g.node_count(); ++j) CHECK(hi.values()[j][0] >= lo.values()[j][0]);
}

TEST_CASE("blowup is reported") {
    const Grid g = Grid::make(1.0, 0.5, 64);
    const auto p = linear_vide(1e9, 0, [](double) { return 0.0; }, [](double) { return 1.0; }, 0, 0,
                               zero_singleton(), 0.5, 1.0, 0.5);
    const auto u = ControlSignal::constant(g, Vec::Zero(1), p.controls);
    CHECK_THROWS_AS(solve_vide(p, u, g), NumericalBlowup);
}
