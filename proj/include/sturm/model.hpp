// Problem definition: coefficient field a, f with derivatives, numeric
// parameters, config-file parsing and the sampled dissipativity check.
#ifndef STURM_MODEL_HPP
#define STURM_MODEL_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sturm/expr.hpp"

namespace sturm {

// Evaluators for a(theta,u,p), f(theta,u,p) and the partial derivatives the
// eigenproblem and Lyapunov construction need. Immutable after construction;
// safe to call concurrently.
class CoefficientField {
  public:
    using Fn = std::function<double(double theta, double u, double p)>;

    CoefficientField() = default;
    CoefficientField(Fn a, Fn f, Fn df_du, Fn df_dp, Fn da_du, Fn da_dp)
        : a_(std::move(a)), f_(std::move(f)), df_du_(std::move(df_du)),
          df_dp_(std::move(df_dp)), da_du_(std::move(da_du)), da_dp_(std::move(da_dp)) {}

    // Builds evaluators from DSL expressions with `lambda` bound. Derivatives
    // are symbolic when the trees allow it, otherwise central finite
    // differences with step h_fd * max(1, |u|).
    static CoefficientField from_expressions(const Expression& a, const Expression& f,
                                             double lambda, double h_fd = 1e-6);

    double a(double theta, double u, double p) const { return a_(theta, u, p); }
    double f(double theta, double u, double p) const { return f_(theta, u, p); }
    double f_u(double theta, double u, double p) const { return df_du_(theta, u, p); }
    double f_p(double theta, double u, double p) const { return df_dp_(theta, u, p); }
    double a_u(double theta, double u, double p) const { return da_du_(theta, u, p); }
    double a_p(double theta, double u, double p) const { return da_dp_(theta, u, p); }

    bool symbolic_derivatives() const { return symbolic_; }

  private:
    Fn a_, f_, df_du_, df_dp_, da_du_, da_dp_;
    bool symbolic_ = false;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// A problem instance: expressions plus every numeric knob of the pipeline.
struct ProblemSpec {
    std::string a_text = "1";
    std::string f_text;
    double lambda = 1.0;

    // numerics
    double eps_theta = 1e-3;       // truncation distance from the poles
    double ode_tol = 1e-11;        // local error per integrator step
    int grid_n = 256;              // theta-grid resolution (grid_n+1 nodes)
    Interval d_range{-1.5, 1.5};
    Interval e_range{-1.5, 1.5};
    int samples = 400;             // cross-section sample count
    unsigned seed = 0;

    // tolerances
    double root_tol = 1e-9;        // Newton residual for intersections
    double merge_tol = 1e-6;       // duplicate-root merge distance in (d,e)
    double angle_tol = 1e-3;       // hyperbolicity margin on zeta, rad
    double overflow_guard = 1e6;   // |u|+|p| divergence threshold
    double theta_cut = M_PI / 2;
    double conv_tol = 1e-6;        // L2_w convergence radius for simulations
    double h_fd = 1e-6;            // finite-difference step scale

    void validate() const;  // throws std::invalid_argument on bad parameters
    CoefficientField field() const { return field_at(lambda); }
    CoefficientField field_at(double lambda_value) const;
};

// Reads the CLI config format: sections [problem] (a, f, lambda) and
// [numerics] (eps_theta, ode_tol, grid_n, d_min, d_max, e_min, e_max,
// samples, seed, theta_cut, root_tol, merge_tol, angle_tol, conv_tol).
ProblemSpec load_problem_spec(const std::string& path);
ProblemSpec parse_problem_spec(const std::string& text);

// --- dissipativity report -------------------------------------------------

struct SampleBox {
    Interval theta{1e-3, M_PI - 1e-3};
    Interval u{-3.0, 3.0};
    Interval p{-3.0, 3.0};
    int n_theta = 11;
    int n_u = 21;
    int n_p = 11;
    double sign_threshold = 2.0;   // |u| above which f(.,u,0)*u < 0 is required
    double parabolic_min = 1e-8;   // lower bound demanded of a
};

struct ConditionResult {
    bool holds = true;
    bool checkable = true;  // growth exponent condition cannot be sampled
    std::string note;
    // first counterexample, if any
    bool has_counterexample = false;
    double theta = 0, u = 0, p = 0, value = 0;
};

struct DissipativityReport {
    ConditionResult sign_condition;    // f(theta,u,0)*u < 0 for large |u|
    ConditionResult growth_condition;  // |f| < f1 + f2 |p|^gamma, gamma < 2
    ConditionResult coeff_bounds;      // a_u, a_p finite on the box
    ConditionResult parabolicity;      // 0 < eps <= a <= delta
    bool all_hold() const {
        return sign_condition.holds && growth_condition.holds && coeff_bounds.holds &&
               parabolicity.holds;
    }
};

DissipativityReport check_dissipativity(const ProblemSpec& spec, const SampleBox& box);

}  // namespace sturm

#endif
