// Equilibria as intersections of the shooting curves: root finding in
// (d, e), profile reconstruction, tangent/eigen angle flows, Morse indices.
#ifndef STURM_EQUILIBRIA_HPP
#define STURM_EQUILIBRIA_HPP

#include <utility>
#include <vector>

#include "sturm/grid.hpp"
#include "sturm/shooting.hpp"

namespace sturm {

struct EquilibriumRecord {
    double d = 0.0;
    double e = 0.0;
    GridFunction profile;          // u on the theta-grid
    double u_at_0 = 0.0;           // = d
    int morse_index = -1;
    double zeta = 0.0;             // clockwise tangent angle between M^u and M^s
    bool hyperbolic = false;
    int label_u = 0;               // 1-based rank along M^u (by d)
    int label_s = 0;               // 1-based rank along M^s (by e)
    double neumann_residual = 0.0; // pole-slope deviation from the series start
    double joint_mismatch = 0.0;   // |(u,p)| gap of the two shots at theta_cut
};

// Adaptively refined polyline of a sampled cross-section: segments that are
// long in the (u,p) plane and touch the search window are subdivided by
// extra shots, so steep sweeps of the curve cannot hide crossings.
struct CurvePolyline {
    Side side = Side::Unstable;
    std::vector<double> params;
    std::vector<double> u, p;
    std::vector<bool> gap_after;  // true: no usable segment between i and i+1
};
CurvePolyline refine_cross_section(const ProblemSpec& spec, const CoefficientField& cf,
                                   const SampledCurve& curve, double window,
                                   double chord_tol, int threads = 1);

struct CrossingSeed {
    double d, e;  // curve parameters at the crossing
    double u, p;  // crossing point at the cut
};
// Crossings of the refined polylines, deduplicated at shared vertices.
std::vector<CrossingSeed> crossing_candidates(const ProblemSpec& spec,
                                              const CoefficientField& cf,
                                              const SampledCurve& curve_u,
                                              const SampledCurve& curve_s, int threads = 1);

// Candidate brackets from segment crossings of the sampled curves, refined by
// a damped 2-variable Newton on F(d,e) = (u^u(d)-u^s(e), p^u(d)-p^s(e)) to
// |F|_inf <= root_tol. Non-convergent candidates are dropped; duplicates
// within merge_tol in (d,e) are merged. Result sorted by d.
std::vector<std::pair<double, double>> find_intersections(const SampledCurve& curve_u,
                                                          const SampledCurve& curve_s,
                                                          const ProblemSpec& spec,
                                                          const CoefficientField& cf,
                                                          int threads = 1);

struct ProfileResult {
    GridFunction u;
    GridFunction slope;      // u_theta on the same grid
    double joint_mismatch;   // hypot of the (u,p) gap at theta_cut
    double neumann_residual; // max pole-end deviation of u_theta from the series
};

// Two-sided dense-output shooting joined at theta_cut. Throws if the joint
// mismatch exceeds 10 * root_tol.
ProfileResult reconstruct_profile(const ProblemSpec& spec, const CoefficientField& cf,
                                  double d, double e, int grid_n);

// Polar angle of the linearization along the equilibrium with spectral
// parameter Lambda, integrated from both poles and matched at theta_cut:
// psi(Lambda) = mu_forward(theta_cut) - mu_backward(theta_cut), unwrapped,
// decreasing in Lambda. Eigenvalues solve psi(Lambda_k) = k pi; the tangent
// angle difference is zeta = psi(0).
double angle_flow(const ProblemSpec& spec, const CoefficientField& cf, double d, double e,
                  double lambda_trial);

struct TangentAngles {
    double nu;        // forward tangent angle at theta_cut
    double nu_tilde;  // backward tangent angle at theta_cut
    double zeta;      // nu - nu_tilde
};
TangentAngles tangent_angles(const ProblemSpec& spec, const CoefficientField& cf, double d,
                             double e);

struct Spectrum {
    std::vector<double> eigenvalues;  // decreasing, indices 0..k
    bool complete = true;             // false when a bracket was not found
};
Spectrum eigen_spectrum(const ProblemSpec& spec, const CoefficientField& cf, double d,
                        double e, int n_max);

// Eigenfunction for the eigenvalue closest to lambda_k, two-sided linear
// integration matched at theta_cut, normalized to sup-norm 1.
GridFunction eigenfunction(const ProblemSpec& spec, const CoefficientField& cf, double d,
                           double e, double lambda_k, int grid_n);

// i = 1 + floor(zeta / pi). Throws std::runtime_error when not hyperbolic.
int morse_index(const EquilibriumRecord& rec);
int morse_index_from_zeta(double zeta);

// Full pipeline: cross-sections, intersections, profiles, angles, labels.
// Records are sorted by d. Non-hyperbolic equilibria are flagged, not dropped.
std::vector<EquilibriumRecord> compute_equilibria(const ProblemSpec& spec, int threads = 1);

}  // namespace sturm

#endif
