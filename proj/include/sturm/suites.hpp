// Verification suites: simulation- and sampling-based checks of the
// structural invariants (monotonicity, symmetry, dropping, energy decrease,
// adjacency-cascade equivalence, heteroclinic targets).
#ifndef STURM_SUITES_HPP
#define STURM_SUITES_HPP

#include <string>
#include <vector>

#include "sturm/model.hpp"

namespace sturm {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string details;
};

// Unwrapped-angle and radius monotonicity in d, and angle monotonicity in
// lambda, on 20x20 grids of (parameter, theta) samples; strict with margin
// 1e-10.
SuiteResult suite_monotonicity(const ProblemSpec& spec, int threads = 1);

// Odd symmetry of the shooting curve and pointwise-negative profile pairs.
SuiteResult suite_symmetry(const ProblemSpec& spec, int threads = 1);

// z^t(u1 - u2) nonincreasing along random trajectory pairs, z^t(u_t)
// nonincreasing, and LaSalle convergence of the endpoints.
SuiteResult suite_dropping(const ProblemSpec& spec, int n_pairs = 100, int threads = 1);

// Energy nonincreasing per step and discrete dE/dt against -int |u_t|^2 sin.
SuiteResult suite_lyapunov(const ProblemSpec& spec, int n_traj = 50, int grid_n = 512,
                           int threads = 1);

// adjacent == cascadly_adjacent over all ordered pairs with an index drop.
SuiteResult suite_wolfrum(const ProblemSpec& spec, int threads = 1);

// Perturbs the highest-index equilibrium along its unstable directions and
// checks each run lands on a predicted adjacent target.
SuiteResult suite_heteroclinics(const ProblemSpec& spec, double t_max = 50.0,
                                int threads = 1);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const ProblemSpec& spec, int threads = 1);

// Smooth random initial condition: a low-mode Legendre combination.
std::vector<double> random_profile_coeffs(unsigned seed, int n_modes = 5);
double legendre_p(int k, double x);

}  // namespace sturm

#endif
