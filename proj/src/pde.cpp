#include "sturm/pde.hpp"

#include <algorithm>
#include <cmath>

#include "sturm/parallel.hpp"
#include "sturm/permutation.hpp"
#include "sturm/rk.hpp"

namespace sturm {

GridFunction laplacian_axisym(const GridFunction& u) {
    if (u.n < 16) throw std::invalid_argument("laplacian_axisym: grid too coarse");
    GridFunction out(u.n);
    double h = u.h(), h2 = h * h;
    out[0] = 4.0 * (u[1] - u[0]) / h2;
    out[u.n] = 4.0 * (u[u.n - 1] - u[u.n]) / h2;
    for (int j = 1; j < u.n; ++j) {
        double second = (u[j - 1] - 2 * u[j] + u[j + 1]) / h2;
        double first = (u[j + 1] - u[j - 1]) / (2 * h);
        out[j] = second + first / std::tan(u.theta(j));
    }
    return out;
}

GridFunction grid_slope(const GridFunction& u) {
    GridFunction s(u.n);
    double h = u.h();
    s[0] = 0.0;
    s[u.n] = 0.0;
    for (int j = 1; j < u.n; ++j) s[j] = (u[j + 1] - u[j - 1]) / (2 * h);
    return s;
}

namespace {

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                  std::vector<double>& sup, std::vector<double>& rhs) {
    std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

GridFunction pde_step(const GridFunction& u, const CoefficientField& cf, double dt,
                      Scheme scheme, double t_now) {
    int n = u.n;
    double h = u.h(), h2 = h * h;
    GridFunction slope = grid_slope(u);
    std::vector<double> a(n + 1), f(n + 1);
    double max_a = 0.0;
    for (int j = 0; j <= n; ++j) {
        double th = u.theta(j);
        a[j] = cf.a(th, u[j], slope[j]);
        f[j] = cf.f(th, u[j], slope[j]);
        max_a = std::max(max_a, a[j]);
    }

    GridFunction out(n);
    if (scheme == Scheme::Explicit) {
        if (dt > 0.4 * h2 / max_a + 1e-15)
            throw std::invalid_argument("pde_step: explicit dt exceeds stability bound");
        GridFunction lap = laplacian_axisym(u);
        for (int j = 0; j <= n; ++j) out[j] = u[j] + dt * (a[j] * lap[j] + f[j]);
    } else {
        // (I - dt a_j Lax) u_new = u + dt f, with a frozen at the current state
        std::vector<double> sub(n + 1, 0), diag(n + 1, 0), sup(n + 1, 0), rhs(n + 1, 0);
        for (int j = 0; j <= n; ++j) rhs[j] = u[j] + dt * f[j];
        diag[0] = 1 + dt * a[0] * 4 / h2;
        sup[0] = -dt * a[0] * 4 / h2;
        diag[n] = 1 + dt * a[n] * 4 / h2;
        sub[n] = -dt * a[n] * 4 / h2;
        for (int j = 1; j < n; ++j) {
            double cot = 1.0 / std::tan(u.theta(j));
            double lo = 1 / h2 - cot / (2 * h);
            double mid = -2 / h2;
            double hi = 1 / h2 + cot / (2 * h);
            sub[j] = -dt * a[j] * lo;
            diag[j] = 1 - dt * a[j] * mid;
            sup[j] = -dt * a[j] * hi;
        }
        thomas_solve(sub, diag, sup, rhs);
        out.values = std::move(rhs);
    }
    for (double v : out.values)
        if (!std::isfinite(v)) throw BlowUpError(t_now + dt);
    return out;
}

Trajectory simulate(const GridFunction& u0, const CoefficientField& cf, double t_end,
                    double dt, Scheme scheme, int stride) {
    Trajectory traj;
    traj.dt = dt;
    traj.scheme = scheme;
    GridFunction u = u0;
    double t = 0.0;
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    long steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    for (long s = 1; s <= steps; ++s) {
        u = pde_step(u, cf, dt, scheme, t);
        t = s * dt;
        if (s % stride == 0 || s == steps) {
            traj.times.push_back(t);
            traj.snapshots.push_back(u);
        }
    }
    return traj;
}

namespace {

// 20-point Gauss-Legendre on [-1, 1]
constexpr double kGlx[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                             0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                             0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                             0.9931285991850949};
constexpr double kGlw[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                             0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                             0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                             0.0176140071391521};

double antiderivative_f(const CoefficientField& cf, double theta, double u) {
    // F(theta, u) = int_0^u f(theta, s, 0) ds
    double half = u / 2;
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
        sum += kGlw[i] * cf.f(theta, half * (1 + kGlx[i]), 0.0);
        sum += kGlw[i] * cf.f(theta, half * (1 - kGlx[i]), 0.0);
    }
    return half * sum;
}

void require_p_independent(const CoefficientField& cf) {
    for (double theta : {0.7, 1.6, 2.5})
        for (double u : {-1.1, 0.3, 0.9}) {
            double f0 = cf.f(theta, u, 0.0);
            double f1 = cf.f(theta, u, 1.0);
            if (std::abs(f1 - f0) > 1e-12 * (1 + std::abs(f0)))
                throw std::runtime_error(
                    "lyapunov_energy: f depends on p; needs the characteristic weight g");
        }
}

}  // namespace

double lyapunov_energy(const GridFunction& u, const CoefficientField& cf) {
    require_p_independent(cf);
    GridFunction slope = grid_slope(u);
    double h = u.h(), sum = 0.0;
    for (int j = 0; j <= u.n; ++j) {
        double th = u.theta(j);
        double dens = (0.5 * slope[j] * slope[j] - antiderivative_f(cf, th, u[j])) *
                      std::sin(th);
        sum += (j == 0 || j == u.n) ? dens / 2 : dens;  // trapezoid
    }
    return sum * h;
}

double GTable::query(double theta, double u, double p) const {
    if (thetas.empty()) throw std::runtime_error("GTable: empty table");
    std::size_t row = 0;
    double best = std::abs(thetas[0] - theta);
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        double d = std::abs(thetas[i] - theta);
        if (d < best) {
            best = d;
            row = i;
        }
    }
    const auto& entries = rows[row];
    if (entries.empty()) throw std::runtime_error("GTable: no surviving characteristics");
    double bd = 0.0, g = 0.0;
    bool first = true;
    for (const auto& e : entries) {
        double d = std::hypot(e.u - u, e.p - p);
        if (first || d < bd) {
            bd = d;
            g = e.g;
            first = false;
        }
    }
    return g;
}

GTable lagrangian_g(const ProblemSpec& spec, const CoefficientField& cf,
                    const std::vector<double>& u_lattice, const std::vector<double>& p_lattice,
                    int n_theta) {
    GTable table;
    for (int i = 0; i < n_theta; ++i)
        table.thetas.push_back(spec.eps_theta +
                               (M_PI - 2 * spec.eps_theta) * i / (n_theta - 1));
    table.rows.resize(n_theta);

    // characteristic system in theta: (u, p, g)
    auto rhs = [&cf](double theta, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        double a = cf.a(theta, y[0], y[1]);
        double f = cf.f(theta, y[0], y[1]);
        double fp = cf.f_p(theta, y[0], y[1]);
        double ap = cf.a_p(theta, y[0], y[1]);
        dy[0] = y[1];
        dy[1] = -f / a - y[1] * std::cos(theta) / std::sin(theta);
        dy[2] = (fp - ap * f / a) / a;  // (f/a)_p
    };

    IntegrateOptions opt;
    opt.tol = std::max(spec.ode_tol, 1e-9);
    opt.overflow_guard = spec.overflow_guard;

    for (double u0 : u_lattice)
        for (double p0 : p_lattice) {
            std::array<double, 3> y{u0, p0, 0.0};
            double theta = table.thetas.front();
            table.rows[0].push_back({y[0], y[1], y[2]});
            bool alive = true;
            for (int i = 1; i < n_theta; ++i) {
                auto res = integrate_dopri5<3>(rhs, theta, y, table.thetas[i], opt);
                if (res.diverged) {
                    alive = false;
                    break;
                }
                theta = res.x;
                y = res.y;
                table.rows[i].push_back({y[0], y[1], y[2]});
            }
            table.flagged.push_back(!alive);
        }
    return table;
}

std::vector<std::pair<double, int>> zero_number_track(const Trajectory& t1,
                                                      const Trajectory& t2) {
    if (t1.times.size() != t2.times.size())
        throw std::invalid_argument("zero_number_track: snapshot count mismatch");
    std::vector<std::pair<double, int>> out;
    for (std::size_t s = 0; s < t1.times.size(); ++s) {
        if (t1.times[s] != t2.times[s])
            throw std::invalid_argument("zero_number_track: time stamps differ");
        GridFunction d(t1.snapshots[s].n);
        for (int j = 0; j <= d.n; ++j) d[j] = t1.snapshots[s][j] - t2.snapshots[s][j];
        out.emplace_back(t1.times[s], zero_number(d));
    }
    return out;
}

std::vector<HeteroclinicOutcome> verify_heteroclinic(
    const EquilibriumRecord& from, const std::vector<EquilibriumRecord>& all,
    const ProblemSpec& spec, double amplitude, double t_max, int threads) {
    int n_dir = from.morse_index;
    if (n_dir <= 0) return {};
    CoefficientField cf = spec.field();
    Spectrum sp = eigen_spectrum(spec, cf, from.d, from.e, n_dir - 1);
    if (static_cast<int>(sp.eigenvalues.size()) < n_dir)
        throw std::runtime_error("verify_heteroclinic: incomplete unstable spectrum");

    std::vector<HeteroclinicOutcome> outcomes(2 * n_dir);
    parallel_for(outcomes.size(), threads, [&](std::size_t idx) {
        int k = static_cast<int>(idx) / 2;
        int sign = idx % 2 == 0 ? +1 : -1;
        HeteroclinicOutcome& o = outcomes[idx];
        o.mode_k = k;
        o.sign = sign;

        GridFunction phi = eigenfunction(spec, cf, from.d, from.e, sp.eigenvalues[k],
                                         spec.grid_n);
        GridFunction u = from.profile;
        for (int j = 0; j <= u.n; ++j) u[j] += sign * amplitude * phi[j];

        double dt = u.h();
        long check_every = 25;
        GridFunction prev = u;
        double t = 0.0;
        // Target = first equilibrium (other than the start) whose conv_tol
        // ball the trajectory enters. Saddle targets are visited and left
        // again once rounding noise excites their unstable direction, so the
        // distance is minimized over the visit instead of demanding a stall.
        int target = -1;
        double target_best = 0.0, target_time = 0.0;
        auto finalize = [&] {
            o.reached_label = target;
            o.final_dist = target_best;
            o.time = target_time;
        };
        try {
            for (long s = 1; t < t_max; ++s) {
                u = pde_step(u, cf, dt, Scheme::Imex, t);
                t = s * dt;
                if (s % check_every != 0) continue;
                int best = -1;
                double bd = 0.0;
                for (std::size_t r = 0; r < all.size(); ++r) {
                    if (all[r].label_u == from.label_u) continue;
                    double d = dist_w(u, all[r].profile);
                    if (best < 0 || d < bd) {
                        bd = d;
                        best = static_cast<int>(r) + 1;
                    }
                }
                double rate = dist_w(u, prev) / (check_every * dt);
                prev = u;
                if (target < 0) {
                    if (bd < spec.conv_tol) {
                        target = best;
                        target_best = bd;
                        target_time = t;
                    }
                } else {
                    double d = dist_w(u, all[target - 1].profile);
                    if (d < target_best) {
                        target_best = d;
                        target_time = t;
                    }
                    if (d > spec.conv_tol) {  // visit over: the ball was left
                        finalize();
                        return;
                    }
                }
                if (target >= 0 && rate < 1e-10 * (1 + norm_w(u))) {
                    finalize();
                    return;
                }
            }
        } catch (const BlowUpError& b) {
            if (target >= 0) {
                finalize();
                return;
            }
            o.diverged = true;
            o.time = b.time;
            return;
        }
        // timeout: report the visited target, if any
        o.time = t;
        if (target >= 0) finalize();
    });
    return outcomes;
}

}  // namespace sturm
