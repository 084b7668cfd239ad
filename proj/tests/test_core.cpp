#include <doctest.h>

#include "fracpmp/core.hpp"

using namespace fracpmp;

TEST_CASE("grid arithmetic") {
    const Grid a = Grid::make(2.0, 0.5, 2);
    CHECK(a.step() == doctest::Approx(0.25));
    CHECK(a.delay_index() == 2);
    CHECK(a.node_count() == 8);

    const Grid b = Grid::make(1.0, 1.0, 4);
    CHECK(b.step() == doctest::Approx(0.25));
    CHECK(b.delay_index() == 4);
    CHECK(b.node_count() == 4);

    CHECK_THROWS_AS(Grid::make(1.0, 0.3, 1), NonAlignedHorizon);
    CHECK_THROWS_AS(Grid::make(0.2, 0.5, 4), InvalidArgument);
    CHECK_THROWS_AS(Grid::make(1.0, 0.5, 0), InvalidArgument);
}

TEST_CASE("grid reproduces the delay") {
    for (double h : {0.1, 0.3, 0.5, 0.7}) {
        for (std::size_t m : {1u, 3u, 7u, 64u}) {
            const Grid g = Grid::make(10 * h, h, m);
            CHECK(std::abs(g.delay_index() * g.step() - h) <= 1e-12 * h);
        }
    }
}

TEST_CASE("grid mismatch is detected") {
    const Grid g = Grid::make(2.0, 0.5, 4);
    CHECK_NOTHROW(g.require_problem(2.0, 0.5));
    CHECK_THROWS_AS(g.require_problem(2.0, 0.25), GridMismatch);
}

TEST_CASE("trajectory evaluation") {
    const Grid g = Grid::make(1.0, 0.5, 2);
    std::vector<Vec> v;
    for (std::size_t j = 0; j <= g.node_count(); ++j) v.push_back(Vec::Constant(2, double(j * j)));
    const Trajectory y(g, v);

    CHECK(y.eval(-0.25).isZero());
    CHECK(y.has_zero_history());
    // midpoint rule of the interpolant
    CHECK(y.eval(0.375)[0] == doctest::Approx((1.0 + 4.0) / 2));
    // continuity at nodes
    for (std::size_t j = 0; j <= g.node_count(); ++j) {
        const double t = g.time(static_cast<std::ptrdiff_t>(j));
        CHECK(y.eval(t)[1] == doctest::Approx(double(j * j)));
        if (j > 0) CHECK(y.eval(t - 1e-13)[1] == doctest::Approx(double(j * j)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(y.eval(1.5), OutOfDomain);
    CHECK_THROWS_AS(y.eval(-0.75), OutOfDomain);
    CHECK(y.node(-2).isZero());
}

TEST_CASE("constant trajectory") {
    const Grid g = Grid::make(2.0, 1.0, 3);
    const Trajectory y(g, std::vector<Vec>(g.node_count() + 1, Vec::Constant(1, 4.5)),
                       std::vector<Vec>(g.delay_index() + 1, Vec::Constant(1, 4.5)));
    for (std::size_t j = 0; j <= g.node_count(); ++j) {
        CHECK(y.eval(g.time(static_cast<std::ptrdiff_t>(j)))[0] == 4.5);
    }
    CHECK(y.eval(-0.5)[0] == 4.5);
}

TEST_CASE("trajectory validation") {
    const Grid g = Grid::make(1.0, 0.5, 2);
    CHECK_THROWS_AS(Trajectory(g, std::vector<Vec>(3, Vec::Zero(1))), InvalidArgument);
    std::vector<Vec> v(5, Vec::Zero(1));
    v[2] = Vec::Zero(2);
    CHECK_THROWS_AS(Trajectory(g, v), InvalidArgument);
}

TEST_CASE("adjoint trajectory has a zero tail") {
    const Grid g = Grid::make(1.0, 0.5, 2);
    const AdjointTrajectory psi(g, std::vector<Vec>(5, Vec::Ones(2)));
    CHECK(psi.eval(1.0).isZero());
    CHECK(psi.eval(1.3).isZero());
    CHECK(psi.node(6).isZero());
    CHECK(psi.eval(0.6)[0] == 1.0);
}

TEST_CASE("control projection") {
    const ControlSet box = ControlSet::box(Vec::Zero(1), Vec::Ones(1));
    CHECK(box.project(Vec::Constant(1, 1.7))[0] == 1.0);
    CHECK(box.project(Vec::Constant(1, 0.3))[0] == 0.3);

    const ControlSet fin = ControlSet::finite({Vec::Constant(1, 1.0), Vec::Constant(1, 0.0)});
    CHECK(fin.project(Vec::Constant(1, 0.6))[0] == 1.0);
    CHECK(fin.project(Vec::Constant(1, 0.5))[0] == 0.0);  // tie to the smaller point
    CHECK(fin.as_finite()->points.front()[0] == 0.0);

    for (double v : {-3.0, 0.2, 0.5, 0.51, 9.0}) {
        const Vec x = Vec::Constant(1, v);
        CHECK(box.project(box.project(x)) == box.project(x));
        CHECK(fin.project(fin.project(x)) == fin.project(x));
    }
}

TEST_CASE("control set validation") {
    CHECK_THROWS_AS(ControlSet::box(Vec::Ones(1), Vec::Zero(1)), InvalidArgument);
    CHECK_THROWS_AS(ControlSet::finite({}), InvalidArgument);
    CHECK_THROWS_AS(ControlSet::finite({Vec::Ones(1), Vec::Ones(1)}), InvalidArgument);
    CHECK(ControlSet::box(Vec::Ones(2), Vec::Ones(2)).is_singleton());
    CHECK(ControlSet::finite({Vec::Ones(2)}).is_singleton());
}

TEST_CASE("control signals must be admissible") {
    const Grid g = Grid::make(1.0, 0.5, 2);
    const ControlSet box = ControlSet::box(Vec::Zero(1), Vec::Ones(1));
    CHECK_THROWS_AS(ControlSignal::constant(g, Vec::Constant(1, 2.0), box), InvalidArgument);
    const auto u = ControlSignal::constant(g, Vec::Constant(1, 0.5), box);
    CHECK(u.values().size() == g.node_count() + 1);
    CHECK(u.dim() == 1);
}

TEST_CASE("lexicographic order") {
    Vec a(2), b(2);
    a << 0, 5;
    b << 1, 0;
    CHECK(lexicographically_less(a, b));
    CHECK_FALSE(lexicographically_less(b, a));
    CHECK_FALSE(lexicographically_less(a, a));
}
