#pragma once

// Small problem builders shared by the tests.

#include <functional>

#include "fracpmp/core.hpp"

namespace testprob {

using namespace fracpmp;

/// D^alpha y = A y + Ad y(t-h) + B u,  g = c_y y + c_yh y_h + r.u + q |u|^2.
inline FddeProblem linear_fdde(const Mat& A, const Mat& Ad, const Mat& B, const RowVec& cy,
                               const RowVec& cyh, const RowVec& r, double q, ControlSet U,
                               double alpha, double T, double h) {
    FddeProblem p;
    p.alpha = alpha;
    p.horizon = T;
    p.delay = h;
    p.state_dim = static_cast<std::size_t>(A.rows());
    p.control_dim = static_cast<std::size_t>(B.cols());
    p.f = [A, Ad, B](double, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
        return A * y + Ad * yh + B * u;
    };
    p.f_y = [A](double, const Vec&, const Vec&, const Vec&) -> Mat { return A; };
    p.f_yh = [Ad](double, const Vec&, const Vec&, const Vec&) -> Mat { return Ad; };
    p.g = [cy, cyh, r, q](double, const Vec& y, const Vec& yh, const Vec& u) {
        return (cy * y)(0) + (cyh * yh)(0) + (r * u)(0) + q * u.squaredNorm();
    };
    p.g_y = [cy](double, const Vec&, const Vec&, const Vec&) -> RowVec { return cy; };
    p.g_yh = [cyh](double, const Vec&, const Vec&, const Vec&) -> RowVec { return cyh; };
    p.controls = std::move(U);
    return p;
}

inline Mat mat1(double a) { return Mat::Constant(1, 1, a); }
inline RowVec row1(double a) { return RowVec::Constant(1, a); }
inline Vec vec1(double a) { return Vec::Constant(1, a); }

inline ControlSet unit_box() { return ControlSet::box(vec1(0.0), vec1(1.0)); }

/// Scalar problem with f = c (constant) and g = 0.
inline FddeProblem constant_rhs(double c, double alpha, double T, double h) {
    return linear_fdde(mat1(0), mat1(0), mat1(c), row1(0), row1(0), row1(0), 0.0,
                       ControlSet::box(vec1(1.0), vec1(1.0)), alpha, T, h);
}

}  // namespace testprob

namespace testprob {

/// y = eta + int_0^t (t-s)^{alpha-1} [a y(s) + b y(s-h) + k(s) + B u(s)] ds,  g = c_y y + q u^2.
inline VideProblem linear_vide(double a, double b, std::function<double(double)> k,
                               std::function<double(double)> eta, double cy, double q,
                               ControlSet U, double alpha, double T, double h, double B = 0.0) {
    VideProblem p;
    p.alpha = alpha;
    p.horizon = T;
    p.delay = h;
    p.state_dim = 1;
    p.control_dim = 1;
    p.f = [a, b, k, B](double, double s, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
        return Vec::Constant(1, a * y[0] + b * yh[0] + k(s) + B * u[0]);
    };
    p.f_y = [a](double, double, const Vec&, const Vec&, const Vec&) -> Mat { return mat1(a); };
    p.f_yh = [b](double, double, const Vec&, const Vec&, const Vec&) -> Mat { return mat1(b); };
    p.eta = [eta](double t) { return Vec::Constant(1, eta(t)); };
    p.g = [cy, q](double, const Vec& y, const Vec&, const Vec& u) { return cy * y[0] + q * u[0] * u[0]; };
    p.g_y = [cy](double, const Vec&, const Vec&, const Vec&) -> RowVec { return row1(cy); };
    p.g_yh = [](double, const Vec&, const Vec&, const Vec&) -> RowVec { return row1(0); };
    p.controls = std::move(U);
    return p;
}

inline ControlSet zero_singleton() { return ControlSet::box(Vec::Zero(1), Vec::Zero(1)); }

}  // namespace testprob
