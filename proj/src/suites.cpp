#include "sturm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sturm/connections.hpp"
#include "sturm/parallel.hpp"
#include "sturm/pde.hpp"

namespace sturm {

double legendre_p(int k, double x) {
    double p0 = 1.0, p1 = x;
    if (k == 0) return p0;
    if (k == 1) return p1;
    for (int m = 2; m <= k; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> random_profile_coeffs(unsigned seed, int n_modes) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> c(n_modes);
    for (int k = 0; k < n_modes; ++k) c[k] = 0.8 * dist(rng) / (k + 1);
    return c;
}

namespace {

GridFunction random_profile(int grid_n, unsigned seed) {
    auto c = random_profile_coeffs(seed);
    GridFunction u(grid_n);
    for (int j = 0; j <= grid_n; ++j) {
        double x = std::cos(u.theta(j));
        double v = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * legendre_p(static_cast<int>(k), x);
        u[j] = v;
    }
    return u;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

SuiteResult suite_monotonicity(const ProblemSpec& spec, int threads) {
    SuiteResult res{"monotonicity"};
    constexpr double margin = 1e-10;
    auto checkpoints = linspace(0.3, 2.8, 20);
    auto d_grid = linspace(0.05, 0.95, 20);
    CoefficientField cf = spec.field();

    std::vector<std::vector<PolarSample>> traces(d_grid.size());
    parallel_for(d_grid.size(), threads, [&](std::size_t i) {
        traces[i] = polar_trace(cf, d_grid[i], spec.eps_theta, spec.ode_tol, checkpoints);
    });
    int mu_viol = 0, rho_viol = 0;
    for (std::size_t i = 0; i + 1 < d_grid.size(); ++i)
        for (std::size_t j = 0; j < checkpoints.size(); ++j) {
            if (!(traces[i][j].mu > traces[i + 1][j].mu + margin)) ++mu_viol;
            if (!(traces[i][j].rho < traces[i + 1][j].rho - margin)) ++rho_viol;
        }

    auto lam_grid = linspace(0.5, 8.0, 20);
    std::vector<std::vector<PolarSample>> lam_traces(lam_grid.size());
    parallel_for(lam_grid.size(), threads, [&](std::size_t i) {
        CoefficientField cfi = spec.field_at(lam_grid[i]);
        lam_traces[i] = polar_trace(cfi, 0.5, spec.eps_theta, spec.ode_tol, checkpoints);
    });
    int lam_viol = 0;
    for (std::size_t i = 0; i + 1 < lam_grid.size(); ++i)
        for (std::size_t j = 0; j < checkpoints.size(); ++j)
            if (!(lam_traces[i + 1][j].mu > lam_traces[i][j].mu + margin)) ++lam_viol;

    std::ostringstream d;
    d << "angle-in-d violations " << mu_viol << ", radius-in-d violations " << rho_viol
      << ", angle-in-lambda violations " << lam_viol << " over 19x20 comparisons each";
    res.details = d.str();
    res.pass = mu_viol == 0 && rho_viol == 0 && lam_viol == 0;
    return res;
}

SuiteResult suite_symmetry(const ProblemSpec& spec, int threads) {
    SuiteResult res{"symmetry"};
    CoefficientField cf = spec.field();
    int n = 101;
    SampledCurve c = cross_section(spec, cf, Side::Unstable, spec.theta_cut, {-1.2, 1.2}, n,
                                   threads);
    double curve_err = 0.0;
    for (int i = 0; i < n; ++i) {
        int m = n - 1 - i;
        if (c.diverged[i] || c.diverged[m]) continue;
        curve_err = std::max(curve_err, std::abs(c.u[i] + c.u[m]));
        curve_err = std::max(curve_err, std::abs(c.p[i] + c.p[m]));
    }

    auto recs = compute_equilibria(spec, threads);
    double profile_err = 0.0, spectrum_err = 0.0;
    int pairs = 0;
    for (const auto& r : recs) {
        if (r.d < 1e-6) continue;
        const EquilibriumRecord* partner = nullptr;
        for (const auto& q : recs)
            if (std::abs(q.d + r.d) < 1e-6) partner = &q;
        if (!partner) continue;
        ++pairs;
        for (int j = 0; j <= r.profile.n; ++j)
            profile_err =
                std::max(profile_err, std::abs(r.profile[j] + partner->profile[j]));
        Spectrum sa = eigen_spectrum(spec, cf, r.d, r.e, 2);
        Spectrum sb = eigen_spectrum(spec, cf, partner->d, partner->e, 2);
        for (std::size_t k = 0; k < std::min(sa.eigenvalues.size(), sb.eigenvalues.size()); ++k)
            spectrum_err =
                std::max(spectrum_err, std::abs(sa.eigenvalues[k] - sb.eigenvalues[k]));
    }

    std::ostringstream d;
    d << "curve odd-symmetry error " << curve_err << ", " << pairs
      << " reflection pairs, profile error " << profile_err << ", spectrum error "
      << spectrum_err;
    res.details = d.str();
    res.pass = curve_err < 1e-8 && profile_err < 1e-6 && spectrum_err < 1e-6;
    return res;
}

SuiteResult suite_dropping(const ProblemSpec& spec, int n_pairs, int threads) {
    SuiteResult res{"dropping"};
    CoefficientField cf = spec.field();
    auto recs = compute_equilibria(spec, threads);
    constexpr long n_steps = 1000;

    std::vector<int> pair_viol(n_pairs, 0), ut_viol(n_pairs, 0);
    std::vector<double> end_dist(n_pairs, 0.0);
    parallel_for(n_pairs, threads, [&](std::size_t p) {
        GridFunction u1 = random_profile(spec.grid_n, spec.seed + 2 * (unsigned)p);
        GridFunction u2 = random_profile(spec.grid_n, spec.seed + 2 * (unsigned)p + 1);
        double dt = u1.h();
        int last_z = 0, last_zt = 0;
        bool have_z = false, have_zt = false, z_done = false, zt_done = false;
        for (long s = 0; s < n_steps; ++s) {
            GridFunction n1 = pde_step(u1, cf, dt, Scheme::Imex, s * dt);
            GridFunction n2 = pde_step(u2, cf, dt, Scheme::Imex, s * dt);
            GridFunction diff(u1.n), ut(u1.n);
            for (int j = 0; j <= u1.n; ++j) {
                diff[j] = n1[j] - n2[j];
                ut[j] = (n1[j] - u1[j]) / dt;
            }
            if (!z_done) {
                if (sup_norm(diff) < 1e-12) {
                    z_done = true;  // trajectories merged to rounding level
                } else {
                    int z = zero_number(diff);
                    if (have_z && z > last_z) ++pair_viol[p];
                    last_z = z;
                    have_z = true;
                }
            }
            if (!zt_done) {
                if (sup_norm(ut) < 1e-10) {
                    zt_done = true;
                } else {
                    int zt = zero_number(ut);
                    if (have_zt && zt > last_zt) ++ut_viol[p];
                    last_zt = zt;
                    have_zt = true;
                }
            }
            u1 = std::move(n1);
            u2 = std::move(n2);
        }
        double best = -1.0;
        for (const auto& r : recs) {
            double d = dist_w(u1, r.profile);
            if (best < 0 || d < best) best = d;
        }
        end_dist[p] = best;
    });

    int viols = 0, ut_viols = 0, laselle_fail = 0;
    double worst_dist = 0.0;
    for (int p = 0; p < n_pairs; ++p) {
        viols += pair_viol[p];
        ut_viols += ut_viol[p];
        worst_dist = std::max(worst_dist, end_dist[p]);
        if (end_dist[p] > 1e-3) ++laselle_fail;
    }
    std::ostringstream d;
    d << n_pairs << " pairs x " << n_steps << " steps: z(u1-u2) increases " << viols
      << ", z(u_t) increases " << ut_viols << ", trajectories not near an equilibrium "
      << laselle_fail << " (worst end distance " << worst_dist << ", grid-limited bound 1e-3)";
    res.details = d.str();
    res.pass = viols == 0 && ut_viols == 0 && laselle_fail == 0;
    return res;
}

SuiteResult suite_lyapunov(const ProblemSpec& spec, int n_traj, int grid_n, int threads) {
    SuiteResult res{"lyapunov"};
    const double lambdas[3] = {1.0, 3.0, 7.0};
    constexpr long n_steps = 400;

    std::vector<int> increases(n_traj, 0);
    std::vector<double> sq_err(n_traj, 0.0);
    std::vector<long> n_terms(n_traj, 0);
    parallel_for(n_traj, threads, [&](std::size_t t) {
        CoefficientField cf = spec.field_at(lambdas[t % 3]);
        GridFunction u = random_profile(grid_n, spec.seed + 100 + (unsigned)t);
        double h = u.h();
        double max_a = 0.0;
        GridFunction sl = grid_slope(u);
        for (int j = 0; j <= grid_n; ++j)
            max_a = std::max(max_a, cf.a(u.theta(j), u[j], sl[j]));
        double dt = 0.3 * h * h / max_a;
        double e_prev = lyapunov_energy(u, cf);
        for (long s = 0; s < n_steps; ++s) {
            GridFunction un = pde_step(u, cf, dt, Scheme::Explicit, s * dt);
            double e_next = lyapunov_energy(un, cf);
            if (e_next > e_prev + 1e-8 * (1 + std::abs(e_prev))) ++increases[t];
            double r = (e_next - e_prev) / dt;
            double q = 0.0;
            for (int j = 0; j <= grid_n; ++j) {
                double ut = (un[j] - u[j]) / dt;
                double dens = ut * ut * std::sin(u.theta(j));
                q += (j == 0 || j == grid_n) ? dens / 2 : dens;
            }
            q *= -h;
            if (std::abs(q) > 1e-10) {
                double rel = (r - q) / std::abs(q);
                sq_err[t] += rel * rel;
                ++n_terms[t];
            }
            u = std::move(un);
            e_prev = e_next;
        }
    });

    int total_inc = 0;
    double sq = 0.0;
    long terms = 0;
    for (int t = 0; t < n_traj; ++t) {
        total_inc += increases[t];
        sq += sq_err[t];
        terms += n_terms[t];
    }
    double rms = terms > 0 ? std::sqrt(sq / terms) : 0.0;
    std::ostringstream d;
    d << n_traj << " trajectories x " << n_steps << " steps at grid " << grid_n
      << ": energy increases " << total_inc << ", dE/dt RMS mismatch " << rms;
    res.details = d.str();
    res.pass = total_inc == 0 && rms < 0.05;
    return res;
}

SuiteResult suite_wolfrum(const ProblemSpec& spec, int threads) {
    SuiteResult res{"wolfrum"};
    auto recs = compute_equilibria(spec, threads);
    auto zt = zero_number_table(recs, spec, threads);
    int n = static_cast<int>(recs.size());
    int checked = 0, mismatches = 0;
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            if (j == k || recs[j - 1].morse_index <= recs[k - 1].morse_index) continue;
            ++checked;
            if (adjacent(j, k, recs, zt) != cascadly_adjacent(j, k, recs, zt)) ++mismatches;
        }
    std::ostringstream d;
    d << checked << " ordered pairs checked, " << mismatches << " mismatches";
    res.details = d.str();
    res.pass = mismatches == 0 && checked > 0;
    return res;
}

SuiteResult suite_heteroclinics(const ProblemSpec& spec, double t_max, int threads) {
    SuiteResult res{"heteroclinics"};
    auto recs = compute_equilibria(spec, threads);
    auto zt = zero_number_table(recs, spec, threads);
    auto graph = heteroclinic_edges(recs, zt);

    std::size_t top = 0;
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].morse_index > recs[top].morse_index) top = i;
    int from_label = recs[top].label_u;

    auto outcomes = verify_heteroclinic(recs[top], recs, spec, 1e-3, t_max, threads);
    int bad = 0;
    std::ostringstream d;
    d << outcomes.size() << " perturbation runs from label " << from_label << ":";
    for (const auto& o : outcomes) {
        d << " [k=" << o.mode_k << (o.sign > 0 ? "+" : "-") << " -> " << o.reached_label
          << " dist " << o.final_dist << "]";
        bool ok = !o.diverged && o.reached_label > 0 && o.reached_label != from_label &&
                  graph.has_edge(from_label, o.reached_label);
        if (!ok) ++bad;
    }
    res.details = d.str();
    res.pass = bad == 0 && !outcomes.empty();
    return res;
}

std::vector<std::string> suite_names() {
    return {"monotonicity", "symmetry", "dropping", "lyapunov", "wolfrum", "heteroclinics"};
}

SuiteResult run_suite(const std::string& name, const ProblemSpec& spec, int threads) {
    if (name == "monotonicity") return suite_monotonicity(spec, threads);
    if (name == "symmetry") return suite_symmetry(spec, threads);
    if (name == "dropping") return suite_dropping(spec, 100, threads);
    if (name == "lyapunov") return suite_lyapunov(spec, 50, 512, threads);
    if (name == "wolfrum") return suite_wolfrum(spec, threads);
    if (name == "heteroclinics") return suite_heteroclinics(spec, 50.0, threads);
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace sturm
