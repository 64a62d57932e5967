// Shooting flow for the equilibrium equation: the rescaled first-order
// system, pole series initialization, adaptive integration between the
// truncation angles and cross-sections of the shooting manifolds.
#ifndef STURM_SHOOTING_HPP
#define STURM_SHOOTING_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sturm/model.hpp"

namespace sturm {

// Point of the first-order equilibrium system in the tau-chart.
// p is the tau-derivative of u, so the PDE slope is u_theta = p / sin(theta).
struct ShootState {
    double theta = 0.0;
    double u = 0.0;
    double p = 0.0;
};

enum class Side { Unstable, Stable };

struct SampledCurve {
    double cut_theta = 0.0;
    Side side = Side::Unstable;
    std::vector<double> params;     // strictly increasing d (or e) values
    std::vector<double> u;          // same length as params
    std::vector<double> p;
    std::vector<bool> diverged;     // flagged samples are excluded from use
    std::size_t valid_count() const;
};

struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& msg, ShootState last)
        : std::runtime_error(msg), last(last) {}
    ShootState last;
};

// tau(theta) = ln(tan(theta/2)); maps the poles to -inf/+inf.
double tau_of_theta(double theta);
double theta_of_tau(double tau);

// Right-hand side of the autonomous tau-system (u_tau, p_tau, theta_tau).
struct ShootRhs {
    double u_tau, p_tau, theta_tau;
};
ShootRhs shoot_rhs(const CoefficientField& cf, const ShootState& s);

// Second-order series start on the strong unstable manifold of (0,d,0),
// evaluated at theta = eps_theta (stable side mirrors at pi - eps_theta).
ShootState init_unstable(const CoefficientField& cf, double d, double eps_theta);
ShootState init_stable(const CoefficientField& cf, double e, double eps_theta);

// Integrates the shooting system in the theta-parametrization to
// theta_target (forward or backward). Throws DivergenceError carrying the
// last state when the shot escapes.
ShootState integrate_to(const CoefficientField& cf, ShootState state, double theta_target,
                        double tol, double overflow_guard = 1e6);

// Cross-section of M^u (resp. M^s) at theta_cut, parallel over samples.
SampledCurve cross_section(const ProblemSpec& spec, const CoefficientField& cf, Side side,
                           double theta_cut, Interval param_range, int n, int threads = 1);

// Polar trace of one unstable shot: integrates the shooting flow in polar
// coordinates (u,p) = (rho cos mu, -rho sin mu), so mu is unwrapped by
// construction. Valid while rho > 0 (d != 0 for reflection-symmetric f).
struct PolarSample {
    double theta;
    double rho;
    double mu;
};
std::vector<PolarSample> polar_trace(const CoefficientField& cf, double d, double eps_theta,
                                     double tol, const std::vector<double>& theta_checkpoints);

}  // namespace sturm

#endif
