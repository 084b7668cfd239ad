#include "fracpmp/specfun.hpp"

#include <cmath>
#include <string>

namespace fracpmp {

namespace {

void require_order(double alpha, double h) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("series: alpha must lie in (0, 1]");
    }
    if (!(h > 0.0)) {
        throw InvalidArgument("series: delay must be positive");
    }
}

void require_square(const Mat& A) {
    if (A.rows() != A.cols()) {
        throw InvalidArgument("series: matrix must be square");
    }
}

// (x)_+^p / Gamma(p + 1), read as zero when x <= 0.
double shifted_power(double x, double p) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, p) / gamma_fn(p + 1.0);
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw InvalidArgument("gamma_fn: argument must be positive, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

Vec delayed_power_series(const Mat& A, const Vec& W, double alpha, double h, double t) {
    require_order(alpha, h);
    require_square(A);
    if (W.size() != A.rows()) {
        throw InvalidArgument("delayed_power_series: W dimension differs from A");
    }
    if (t < 0.0) {
        throw InvalidArgument("delayed_power_series: t must be nonnegative");
    }
    Vec sum = Vec::Zero(W.size());
    Vec term = W;  // A^k W
    for (int k = 0; t - k * h > 0.0; ++k) {
        sum += shifted_power(t - k * h, alpha * (k + 1)) * term;
        term = A * term;
    }
    return sum;
}

Mat x_alpha_pure_delay_series(const Mat& B, double alpha, double h, double t) {
    require_order(alpha, h);
    require_square(B);
    if (t < 0.0) {
        throw InvalidArgument("x_alpha_pure_delay_series: t must be nonnegative");
    }
    Mat sum = Mat::Identity(B.rows(), B.cols());
    Mat power = B;
    for (int k = 1; t - k * h > 0.0; ++k) {
        sum += shifted_power(t - k * h, alpha * k) * power;
        power = B * power;
    }
    return sum;
}

Mat delay_control_kernel(const Mat& A, double alpha, double h, double tau) {
    require_order(alpha, h);
    require_square(A);
    if (tau == 0.0) {
        throw SingularPoint("delay_control_kernel: kernel is unbounded at tau = 0");
    }
    if (tau < 0.0) {
        throw InvalidArgument("delay_control_kernel: tau must be positive");
    }
    Mat sum = Mat::Zero(A.rows(), A.cols());
    Mat power = Mat::Identity(A.rows(), A.cols());
    for (int k = 0; tau - k * h > 0.0; ++k) {
        const double p = alpha * (k + 1);
        sum += std::pow(tau - k * h, p - 1.0) / gamma_fn(p) * power;
        power = A * power;
    }
    return sum;
}

Mat delay_control_kernel_integral(const Mat& A, double alpha, double h, double tau_lo,
                                  double tau_hi) {
    require_order(alpha, h);
    require_square(A);
    if (!(tau_lo >= 0.0) || !(tau_hi >= tau_lo)) {
        throw InvalidArgument("delay_control_kernel_integral: need 0 <= tau_lo <= tau_hi");
    }
    Mat sum = Mat::Zero(A.rows(), A.cols());
    Mat power = Mat::Identity(A.rows(), A.cols());
    for (int k = 0; tau_hi - k * h > 0.0; ++k) {
        const double p = alpha * (k + 1);
        const double w = shifted_power(tau_hi - k * h, p) - shifted_power(tau_lo - k * h, p);
        sum += w * power;
        power = A * power;
    }
    return sum;
}

Trajectory linear_pure_delay_response(const Mat& A, const Mat& C, const ControlSignal& u,
                                      double alpha, double h, const Grid& grid) {
    if (!u.grid().same_as(grid)) {
        throw GridMismatch("linear_pure_delay_response: control lives on a different grid");
    }
    grid.require_problem(grid.horizon(), h);
    if (C.rows() != A.rows() || static_cast<std::size_t>(C.cols()) != u.dim()) {
        throw InvalidArgument("linear_pure_delay_response: C has the wrong shape");
    }
    const std::size_t N = grid.node_count();
    const double dt = grid.step();

    // Cell weights depend only on the lag d = n - j >= 1: the kernel
    // integrated over tau in [(d-1) dt, d dt], already multiplied by C.
    std::vector<Mat> lag(N + 1);
    for (std::size_t d = 1; d <= N; ++d) {
        lag[d] = delay_control_kernel_integral(A, alpha, h, static_cast<double>(d - 1) * dt,
                                               static_cast<double>(d) * dt) *
                 C;
    }
    std::vector<Vec> y(N + 1, Vec::Zero(A.rows()));
    for (std::size_t n = 1; n <= N; ++n) {
        for (std::size_t j = 0; j < n; ++j) {
            y[n].noalias() += lag[n - j] * u.node(j);
        }
    }
    return Trajectory(grid, std::move(y));
}

}  // namespace fracpmp
