// Embedded Dormand-Prince 5(4) integrator on small fixed-size states.
// Supports forward and backward integration, a per-accepted-step observer,
// and an overflow guard for divergent shots.
#ifndef STURM_RK_HPP
#define STURM_RK_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace sturm {

struct IntegrateOptions {
    double tol = 1e-11;          // local error per step (abs and rel mixed)
    double h_init = 0.0;         // 0 -> auto
    double h_max = 0.0;          // 0 -> |interval|
    double overflow_guard = 0.0; // 0 -> disabled; else max-norm divergence cut
    std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct IntegrateResult {
    std::array<double, N> y{};
    double x = 0.0;     // last x reached
    bool diverged = false;
    std::size_t steps = 0;
};

struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(double x)
        : std::runtime_error("integrator step size underflow at x=" + std::to_string(x)),
          x(x) {}
    double x;
};

namespace detail {
template <std::size_t N>
double max_norm(const std::array<double, N>& y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}
}  // namespace detail

// rhs: (double x, const array& y, array& dydx)
// observer: (double x_prev, const array& y_prev, double x, const array& y),
// called after each accepted step.
template <std::size_t N, class RHS, class Obs>
IntegrateResult<N> integrate_dopri5(RHS&& rhs, double x0, std::array<double, N> y0,
                                    double x1, const IntegrateOptions& opt, Obs&& observer) {
    using State = std::array<double, N>;

    // Dormand-Prince coefficients
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // error weights: 5th order minus embedded 4th order
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    IntegrateResult<N> res;
    res.y = y0;
    res.x = x0;
    if (x0 == x1) return res;

    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    const double hmax = opt.h_max > 0 ? std::min(opt.h_max, span) : span;
    double h = opt.h_init > 0 ? std::min(opt.h_init, hmax) : std::min(1e-4, hmax);

    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(res.x, res.y, k1);

    while (res.steps < opt.max_steps) {
        if (std::abs(x1 - res.x) <= std::abs(x1 - x0) * 1e-15) break;
        h = std::min(h, hmax);
        bool last = false;
        if (h >= std::abs(x1 - res.x)) {
            h = std::abs(x1 - res.x);
            last = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = res.y[i] + hs * a21 * k1[i];
        rhs(res.x + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = res.y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(res.x + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = res.y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(res.x + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = res.y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(res.x + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = res.y[i] +
                      hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(res.x + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = res.y[i] +
                      hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(res.x + hs, ynew, k7);  // FSAL

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
            double sc = opt.tol * (1.0 + std::max(std::abs(res.y[i]), std::abs(ynew[i])));
            err = std::max(err, std::abs(ei) / sc);
            if (!std::isfinite(ynew[i])) finite = false;
        }

        if (finite && err <= 1.0) {
            double x_prev = res.x;
            State y_prev = res.y;
            res.x = last ? x1 : res.x + hs;
            res.y = ynew;
            k1 = k7;
            ++res.steps;
            observer(x_prev, y_prev, res.x, res.y);
            if (opt.overflow_guard > 0 && detail::max_norm(res.y) > opt.overflow_guard) {
                res.diverged = true;
                return res;
            }
            double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            if (!finite) {
                res.diverged = true;
                return res;
            }
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
        if (h < std::abs(x1 - x0) * 1e-14 || h < 1e-300) {
            res.diverged = true;  // blow-up manifests as step collapse
            return res;
        }
    }
    if (res.steps >= opt.max_steps)
        throw std::runtime_error("integrator exceeded max step count");
    return res;
}

template <std::size_t N, class RHS>
IntegrateResult<N> integrate_dopri5(RHS&& rhs, double x0, std::array<double, N> y0,
                                    double x1, const IntegrateOptions& opt) {
    return integrate_dopri5<N>(
        std::forward<RHS>(rhs), x0, y0, x1, opt,
        [](double, const std::array<double, N>&, double, const std::array<double, N>&) {});
}

}  // namespace sturm

#endif
