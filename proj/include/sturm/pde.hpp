// Method-of-lines simulator for the axisymmetric parabolic equation:
// u_t = a(theta,u,u_theta) (u_thetatheta + u_theta/tan theta) + f(theta,u,u_theta)
// with Neumann poles, plus the Lyapunov energy and heteroclinic verification.
#ifndef STURM_PDE_HPP
#define STURM_PDE_HPP

#include <string>
#include <vector>

#include "sturm/equilibria.hpp"
#include "sturm/grid.hpp"

namespace sturm {

enum class Scheme { Explicit, Imex };

struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> snapshots;
    double dt = 0.0;
    Scheme scheme = Scheme::Imex;
};

struct BlowUpError : std::runtime_error {
    BlowUpError(double time)
        : std::runtime_error("solution blew up at t=" + std::to_string(time)), time(time) {}
    double time;
};

// Central second-order stencil for u_thetatheta + u_theta/tan(theta);
// at the poles the singular term collapses to the limit value 2 u_thetatheta
// with even ghost reflection (Neumann).
GridFunction laplacian_axisym(const GridFunction& u);

// Slope by central differences, zero at the poles.
GridFunction grid_slope(const GridFunction& u);

// One time step. Explicit requires dt <= 0.4 h^2 / max a; Imex treats the
// frozen-coefficient diffusion implicitly (tridiagonal solve) and the
// reaction explicitly. Throws BlowUpError on non-finite values.
GridFunction pde_step(const GridFunction& u, const CoefficientField& cf, double dt,
                      Scheme scheme, double t_now = 0.0);

// Steps u0 to t_end, storing every `stride`-th state (and the final one).
Trajectory simulate(const GridFunction& u0, const CoefficientField& cf, double t_end,
                    double dt, Scheme scheme, int stride = 1);

// E = integral of (1/2 u_theta^2 - F(theta,u)) sin(theta), F the
// u-antiderivative of f at p = 0. Requires f independent of p (probed);
// p-dependent reactions need the characteristic weight from lagrangian_g.
double lyapunov_energy(const GridFunction& u, const CoefficientField& cf);

// Tabulated g(theta,u,p) from dg/dtheta = (f/a)_p along the characteristic
// flow u_theta = p, p_theta = -f/a - p cos/sin, with g = 0 at theta = eps.
// Nearest-neighbor query; L_pp = exp(g) > 0 by construction.
struct GTable {
    struct Entry {
        double u, p, g;
    };
    std::vector<double> thetas;
    std::vector<std::vector<Entry>> rows;   // one entry per surviving characteristic
    std::vector<bool> flagged;              // per-characteristic blow-up flags
    double query(double theta, double u, double p) const;
};
GTable lagrangian_g(const ProblemSpec& spec, const CoefficientField& cf,
                    const std::vector<double>& u_lattice, const std::vector<double>& p_lattice,
                    int n_theta = 17);

// z^t(u1 - u2) per shared snapshot.
std::vector<std::pair<double, int>> zero_number_track(const Trajectory& t1,
                                                      const Trajectory& t2);

struct HeteroclinicOutcome {
    int mode_k = 0;          // unstable direction index
    int sign = +1;           // perturbation sign
    int reached_label = -1;  // 1-based label of the limit equilibrium, -1 if none
    double final_dist = 0.0; // L2_w distance to the reached equilibrium
    double time = 0.0;
    bool diverged = false;
};

// Perturbs `from` along +-phi_k for every unstable direction k < i(from) and
// integrates until an equilibrium is reached or t_max. Reached = the first
// equilibrium (other than `from`) whose conv_tol ball in L2_w the trajectory
// enters; final_dist is minimized over the visit, since saddle targets are
// left again once rounding noise excites their unstable directions. Stable
// equilibria yield an empty verdict list.
std::vector<HeteroclinicOutcome> verify_heteroclinic(
    const EquilibriumRecord& from, const std::vector<EquilibriumRecord>& all,
    const ProblemSpec& spec, double amplitude = 1e-3, double t_max = 50.0, int threads = 1);

}  // namespace sturm

#endif
