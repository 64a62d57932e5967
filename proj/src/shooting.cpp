#include "sturm/shooting.hpp"

#include <cmath>

#include "sturm/parallel.hpp"
#include "sturm/rk.hpp"

namespace sturm {

std::size_t SampledCurve::valid_count() const {
    std::size_t n = 0;
    for (bool d : diverged)
        if (!d) ++n;
    return n;
}

double tau_of_theta(double theta) {
    if (!(theta > 0.0 && theta < M_PI))
        throw std::domain_error("tau_of_theta: theta outside (0, pi)");
    return std::log(std::tan(theta / 2));
}

double theta_of_tau(double tau) {
    return 2.0 * std::atan(std::exp(tau));
}

ShootRhs shoot_rhs(const CoefficientField& cf, const ShootState& s) {
    double sin_t = std::sin(s.theta);
    double slope = s.p / sin_t;  // u_theta
    double a = cf.a(s.theta, s.u, slope);
    double f = cf.f(s.theta, s.u, slope);
    if (!std::isfinite(a) || !std::isfinite(f))
        throw DivergenceError("non-finite coefficient evaluation", s);
    return {s.p, -(f / a) * sin_t * sin_t, sin_t};
}

namespace {

constexpr double kParabolicFloor = 1e-12;

// quadratic-in-theta series at the pole: u = d + c theta^2, 4 c a0 = -f0
ShootState pole_series(const CoefficientField& cf, double value, double eps_theta,
                       bool at_zero) {
    double pole = at_zero ? 0.0 : M_PI;
    double a0 = cf.a(pole, value, 0.0);
    double f0 = cf.f(pole, value, 0.0);
    if (!(a0 > kParabolicFloor))
        throw std::runtime_error("parabolicity failure: a <= 0 at the pole");
    double theta = at_zero ? eps_theta : M_PI - eps_theta;
    double u = value - (f0 / (4 * a0)) * eps_theta * eps_theta;
    double u_theta = (at_zero ? -1.0 : 1.0) * (f0 / (2 * a0)) * eps_theta;
    return {theta, u, u_theta * std::sin(theta)};
}

}  // namespace

ShootState init_unstable(const CoefficientField& cf, double d, double eps_theta) {
    return pole_series(cf, d, eps_theta, true);
}

ShootState init_stable(const CoefficientField& cf, double e, double eps_theta) {
    return pole_series(cf, e, eps_theta, false);
}

ShootState integrate_to(const CoefficientField& cf, ShootState state, double theta_target,
                        double tol, double overflow_guard) {
    auto rhs = [&cf](double theta, const std::array<double, 2>& y,
                     std::array<double, 2>& dy) {
        double sin_t = std::sin(theta);
        double slope = y[1] / sin_t;
        double a = cf.a(theta, y[0], slope);
        double f = cf.f(theta, y[0], slope);
        dy[0] = slope;
        dy[1] = -(f / a) * sin_t;
    };
    IntegrateOptions opt;
    opt.tol = tol;
    opt.overflow_guard = overflow_guard;
    auto res = integrate_dopri5<2>(rhs, state.theta, {state.u, state.p}, theta_target, opt);
    ShootState out{res.x, res.y[0], res.y[1]};
    if (res.diverged) throw DivergenceError("shot diverged", out);
    return out;
}

SampledCurve cross_section(const ProblemSpec& spec, const CoefficientField& cf, Side side,
                           double theta_cut, Interval param_range, int n, int threads) {
    if (n < 64) throw std::invalid_argument("cross_section: need at least 64 samples");
    SampledCurve curve;
    curve.cut_theta = theta_cut;
    curve.side = side;
    curve.params.resize(n);
    curve.u.resize(n);
    curve.p.resize(n);
    curve.diverged.assign(n, false);
    for (int i = 0; i < n; ++i)
        curve.params[i] = param_range.lo + (param_range.hi - param_range.lo) * i / (n - 1);

    parallel_for(n, threads, [&](std::size_t i) {
        double v = curve.params[i];
        ShootState s = side == Side::Unstable ? init_unstable(cf, v, spec.eps_theta)
                                              : init_stable(cf, v, spec.eps_theta);
        try {
            ShootState end = integrate_to(cf, s, theta_cut, spec.ode_tol, spec.overflow_guard);
            curve.u[i] = end.u;
            curve.p[i] = end.p;
        } catch (const DivergenceError&) {
            curve.diverged[i] = true;
            curve.u[i] = curve.p[i] = std::numeric_limits<double>::quiet_NaN();
        }
    });
    if (curve.valid_count() == 0)
        throw std::runtime_error("cross_section: every sample diverged");
    return curve;
}

std::vector<PolarSample> polar_trace(const CoefficientField& cf, double d, double eps_theta,
                                     double tol,
                                     const std::vector<double>& theta_checkpoints) {
    ShootState s0 = init_unstable(cf, d, eps_theta);
    double rho = std::hypot(s0.u, s0.p);
    double mu = std::atan2(-s0.p, s0.u);
    if (!(rho > 0)) throw std::runtime_error("polar_trace: zero radius at start");

    auto rhs = [&cf](double theta, const std::array<double, 2>& y,
                     std::array<double, 2>& dy) {
        double sin_t = std::sin(theta);
        double rho = y[0], mu = y[1];
        double cu = std::cos(mu), su = std::sin(mu);
        double u = rho * cu, p = -rho * su;
        double q = cf.f(theta, u, p / sin_t) / cf.a(theta, u, p / sin_t) * sin_t * sin_t;
        // tau-form: mu_tau = sin^2(mu) + (q/rho) cos(mu); rho_tau = -rho sin cos + q sin
        dy[0] = (-rho * su * cu + q * su) / sin_t;
        dy[1] = (su * su + q * cu / rho) / sin_t;
    };

    IntegrateOptions opt;
    opt.tol = tol;
    opt.overflow_guard = 1e12;
    std::vector<PolarSample> out;
    out.reserve(theta_checkpoints.size());
    double theta = s0.theta;
    std::array<double, 2> y{rho, mu};
    for (double target : theta_checkpoints) {
        if (target < theta)
            throw std::invalid_argument("polar_trace: checkpoints must be increasing");
        auto res = integrate_dopri5<2>(rhs, theta, y, target, opt);
        if (res.diverged)
            throw DivergenceError("polar trace diverged",
                                  {res.x, res.y[0] * std::cos(res.y[1]),
                                   -res.y[0] * std::sin(res.y[1])});
        theta = res.x;
        y = res.y;
        out.push_back({theta, y[0], y[1]});
    }
    return out;
}

}  // namespace sturm
