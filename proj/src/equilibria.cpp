#include "sturm/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "sturm/parallel.hpp"
#include "sturm/rk.hpp"

namespace sturm {

namespace {

struct CutPoint {
    double u, p;
};

CutPoint shoot_to_cut(const ProblemSpec& spec, const CoefficientField& cf, Side side,
                      double param) {
    ShootState s = side == Side::Unstable ? init_unstable(cf, param, spec.eps_theta)
                                          : init_stable(cf, param, spec.eps_theta);
    ShootState end = integrate_to(cf, s, spec.theta_cut, spec.ode_tol, spec.overflow_guard);
    return {end.u, end.p};
}

double cross2(double ax, double ay, double bx, double by) {
    return ax * by - ay * bx;
}

// Proper or touching crossing of segments (p1,p2) and (q1,q2) in the (u,p)
// plane; returns the parameter along (p1,p2) when they cross.
std::optional<double> segment_crossing(CutPoint p1, CutPoint p2, CutPoint q1, CutPoint q2) {
    double rx = p2.u - p1.u, ry = p2.p - p1.p;
    double sx = q2.u - q1.u, sy = q2.p - q1.p;
    double denom = cross2(rx, ry, sx, sy);
    if (denom == 0.0) return std::nullopt;
    double qpx = q1.u - p1.u, qpy = q1.p - p1.p;
    double t = cross2(qpx, qpy, sx, sy) / denom;
    double w = cross2(qpx, qpy, rx, ry) / denom;
    if (t < 0.0 || t > 1.0 || w < 0.0 || w > 1.0) return std::nullopt;
    return t;
}

// Curvature coefficient of the pole series of the linearization with
// spectral parameter Lambda: v = 1 - K theta^2 / 4 near the pole.
double pole_curvature(const CoefficientField& cf, double pole, double value, double lambda) {
    double a = cf.a(pole, value, 0.0);
    double f = cf.f(pole, value, 0.0);
    double fu = cf.f_u(pole, value, 0.0);
    double au = cf.a_u(pole, value, 0.0);
    return (fu - au * f / a - lambda) / a;
}

// theta-parametrized rhs of the nonlinear shot coupled with the polar angle
// of its linearization: state (u, p, mu).
struct AngleRhs {
    const CoefficientField& cf;
    double lambda;
    void operator()(double theta, const std::array<double, 3>& y,
                    std::array<double, 3>& dy) const {
        double st = std::sin(theta);
        double slope = y[1] / st;
        double a = cf.a(theta, y[0], slope);
        double f = cf.f(theta, y[0], slope);
        double fu = cf.f_u(theta, y[0], slope);
        double fp = cf.f_p(theta, y[0], slope);
        double au = cf.a_u(theta, y[0], slope);
        double ap = cf.a_p(theta, y[0], slope);
        double b = (fu - au * f / a) * st * st;  // residual identity, no u_thetatheta
        double c = (fp - ap * f / a) * st;
        double cm = std::cos(y[2]), sm = std::sin(y[2]);
        dy[0] = slope;
        dy[1] = -(f / a) * st;
        dy[2] = (sm * sm + ((b - lambda * st * st) / a) * cm * cm - (c / a) * sm * cm) / st;
    }
};

double angle_one_side(const ProblemSpec& spec, const CoefficientField& cf, Side side,
                      double param, double lambda_trial) {
    ShootState s0 = side == Side::Unstable ? init_unstable(cf, param, spec.eps_theta)
                                           : init_stable(cf, param, spec.eps_theta);
    double pole = side == Side::Unstable ? 0.0 : M_PI;
    double eps = spec.eps_theta;
    double k = pole_curvature(cf, pole, param, lambda_trial);
    // series: v = 1 - k eps^2/4, w = v_tau = v_theta sin(theta)
    double v0 = 1.0 - k * eps * eps / 4;
    double w0 = (side == Side::Unstable ? -1.0 : 1.0) * k * eps * eps / 2;
    double mu0 = std::atan2(-w0, v0);
    IntegrateOptions opt;
    opt.tol = spec.ode_tol;
    opt.overflow_guard = 1e12;
    auto res = integrate_dopri5<3>(AngleRhs{cf, lambda_trial}, s0.theta, {s0.u, s0.p, mu0},
                                   spec.theta_cut, opt);
    if (res.diverged) throw DivergenceError("angle flow diverged", {res.x, res.y[0], res.y[1]});
    return res.y[2];
}

}  // namespace

double angle_flow(const ProblemSpec& spec, const CoefficientField& cf, double d, double e,
                  double lambda_trial) {
    double mu_f = angle_one_side(spec, cf, Side::Unstable, d, lambda_trial);
    double mu_b = angle_one_side(spec, cf, Side::Stable, e, lambda_trial);
    return mu_f - mu_b;
}

TangentAngles tangent_angles(const ProblemSpec& spec, const CoefficientField& cf, double d,
                             double e) {
    TangentAngles t;
    t.nu = angle_one_side(spec, cf, Side::Unstable, d, 0.0);
    t.nu_tilde = angle_one_side(spec, cf, Side::Stable, e, 0.0);
    t.zeta = t.nu - t.nu_tilde;
    return t;
}

CurvePolyline refine_cross_section(const ProblemSpec& spec, const CoefficientField& cf,
                                   const SampledCurve& curve, double window,
                                   double chord_tol, int threads) {
    ProblemSpec sp = spec;
    sp.theta_cut = curve.cut_theta;

    struct Pt {
        double u, p;
        bool ok;
    };
    auto shoot = [&](double param) -> Pt {
        try {
            CutPoint c = shoot_to_cut(sp, cf, curve.side, param);
            return {c.u, c.p, true};
        } catch (const DivergenceError&) {
            return {0, 0, false};
        }
    };
    auto in_window = [&](const Pt& a) {
        return std::abs(a.u) <= window && std::abs(a.p) <= window;
    };
    auto box_near_window = [&](const Pt& a, const Pt& b) {
        return std::min(a.u, b.u) <= window && std::max(a.u, b.u) >= -window &&
               std::min(a.p, b.p) <= window && std::max(a.p, b.p) >= -window;
    };

    std::size_t n = curve.params.size();
    std::vector<std::vector<std::pair<double, Pt>>> pieces(n > 0 ? n - 1 : 0);
    parallel_for(pieces.size(), threads, [&](std::size_t i) {
        auto& out = pieces[i];
        std::function<void(double, Pt, double, Pt, int)> rec = [&](double d1, Pt a, double d2,
                                                                   Pt b, int depth) {
            bool split = false;
            if (depth > 0) {
                if (a.ok && b.ok)
                    split = std::max(std::abs(a.u - b.u), std::abs(a.p - b.p)) > chord_tol &&
                            box_near_window(a, b);
                else if (a.ok != b.ok)
                    split = in_window(a.ok ? a : b);
            }
            if (split) {
                double dm = 0.5 * (d1 + d2);
                Pt m = shoot(dm);
                rec(d1, a, dm, m, depth - 1);
                rec(dm, m, d2, b, depth - 1);
            } else {
                out.emplace_back(d1, a);
            }
        };
        Pt a{curve.u[i], curve.p[i], !curve.diverged[i]};
        Pt b{curve.u[i + 1], curve.p[i + 1], !curve.diverged[i + 1]};
        rec(curve.params[i], a, curve.params[i + 1], b, 48);
    });

    CurvePolyline poly;
    poly.side = curve.side;
    auto push = [&](double param, const Pt& pt) {
        if (pt.ok) {
            poly.params.push_back(param);
            poly.u.push_back(pt.u);
            poly.p.push_back(pt.p);
            poly.gap_after.push_back(false);
        } else if (!poly.gap_after.empty()) {
            poly.gap_after.back() = true;
        }
    };
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (auto& [param, pt] : pieces[i]) push(param, pt);
    if (n > 0)
        push(curve.params[n - 1],
             {curve.u[n - 1], curve.p[n - 1], !curve.diverged[n - 1]});
    return poly;
}

std::vector<CrossingSeed> crossing_candidates(const ProblemSpec& spec,
                                              const CoefficientField& cf,
                                              const SampledCurve& curve_u,
                                              const SampledCurve& curve_s, int threads) {
    if (curve_u.cut_theta != curve_s.cut_theta)
        throw std::invalid_argument("crossing_candidates: curves cut at different theta");
    double span = 1.0;
    for (double v : {spec.d_range.lo, spec.d_range.hi, spec.e_range.lo, spec.e_range.hi})
        span = std::max(span, std::abs(v));
    double window = 3.0 * span;
    double chord_tol = 0.2;
    CurvePolyline pu = refine_cross_section(spec, cf, curve_u, window, chord_tol, threads);
    CurvePolyline ps = refine_cross_section(spec, cf, curve_s, window, chord_tol, threads);

    std::vector<CrossingSeed> seeds;
    for (std::size_t i = 0; i + 1 < pu.params.size(); ++i) {
        if (pu.gap_after[i]) continue;
        CutPoint p1{pu.u[i], pu.p[i]}, p2{pu.u[i + 1], pu.p[i + 1]};
        if (!(std::min(p1.u, p2.u) <= window && std::max(p1.u, p2.u) >= -window &&
              std::min(p1.p, p2.p) <= window && std::max(p1.p, p2.p) >= -window))
            continue;
        for (std::size_t j = 0; j + 1 < ps.params.size(); ++j) {
            if (ps.gap_after[j]) continue;
            CutPoint q1{ps.u[j], ps.p[j]}, q2{ps.u[j + 1], ps.p[j + 1]};
            if (std::max(p1.u, p2.u) < std::min(q1.u, q2.u) ||
                std::min(p1.u, p2.u) > std::max(q1.u, q2.u) ||
                std::max(p1.p, p2.p) < std::min(q1.p, q2.p) ||
                std::min(p1.p, p2.p) > std::max(q1.p, q2.p))
                continue;
            auto t = segment_crossing(p1, p2, q1, q2);
            if (!t) continue;
            CrossingSeed s;
            s.u = p1.u + *t * (p2.u - p1.u);
            s.p = p1.p + *t * (p2.p - p1.p);
            double sx = q2.u - q1.u, sy = q2.p - q1.p;
            double len2 = sx * sx + sy * sy;
            double w = len2 > 0 ? ((s.u - q1.u) * sx + (s.p - q1.p) * sy) / len2 : 0.5;
            s.d = pu.params[i] + *t * (pu.params[i + 1] - pu.params[i]);
            s.e = ps.params[j] + w * (ps.params[j + 1] - ps.params[j]);
            bool dup = false;
            for (auto& o : seeds)
                if (std::abs(o.u - s.u) < 1e-8 && std::abs(o.p - s.p) < 1e-8) dup = true;
            if (!dup) seeds.push_back(s);
        }
    }
    return seeds;
}

std::vector<std::pair<double, double>> find_intersections(const SampledCurve& curve_u,
                                                          const SampledCurve& curve_s,
                                                          const ProblemSpec& spec,
                                                          const CoefficientField& cf,
                                                          int threads) {
    if (curve_u.cut_theta != curve_s.cut_theta)
        throw std::invalid_argument("find_intersections: curves cut at different theta");
    ProblemSpec sp = spec;
    sp.theta_cut = curve_u.cut_theta;

    std::vector<std::pair<double, double>> seeds;
    for (const auto& c : crossing_candidates(sp, cf, curve_u, curve_s, threads))
        seeds.emplace_back(c.d, c.e);

    // damped Newton on F(d,e), central FD Jacobian
    std::vector<std::optional<std::pair<double, double>>> refined(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t idx) {
        double d = seeds[idx].first, e = seeds[idx].second;
        try {
            auto F = [&](double dd, double ee) {
                CutPoint a = shoot_to_cut(sp, cf, Side::Unstable, dd);
                CutPoint b = shoot_to_cut(sp, cf, Side::Stable, ee);
                return std::array<double, 2>{a.u - b.u, a.p - b.p};
            };
            auto norm = [](const std::array<double, 2>& v) {
                return std::max(std::abs(v[0]), std::abs(v[1]));
            };
            auto fv = F(d, e);
            for (int it = 0; it < 60; ++it) {
                if (norm(fv) <= sp.root_tol) {
                    refined[idx] = std::make_pair(d, e);
                    return;
                }
                double hd = 1e-6 * std::max(1.0, std::abs(d));
                double he = 1e-6 * std::max(1.0, std::abs(e));
                auto fdp = F(d + hd, e), fdm = F(d - hd, e);
                auto fep = F(d, e + he), fem = F(d, e - he);
                double j00 = (fdp[0] - fdm[0]) / (2 * hd), j10 = (fdp[1] - fdm[1]) / (2 * hd);
                double j01 = (fep[0] - fem[0]) / (2 * he), j11 = (fep[1] - fem[1]) / (2 * he);
                double det = j00 * j11 - j01 * j10;
                if (det == 0.0 || !std::isfinite(det)) return;
                double sd = (fv[0] * j11 - fv[1] * j01) / det;
                double se = (j00 * fv[1] - j10 * fv[0]) / det;
                double scale = 1.0;
                for (int half = 0; half < 10; ++half) {
                    auto trial = F(d - scale * sd, e - scale * se);
                    if (norm(trial) < norm(fv)) {
                        d -= scale * sd;
                        e -= scale * se;
                        fv = trial;
                        break;
                    }
                    scale /= 2;
                    if (half == 9) return;  // stalled, drop candidate
                }
            }
        } catch (const DivergenceError&) {
            // shot escaped during refinement; candidate dropped
        }
    });

    std::vector<std::pair<double, double>> roots;
    for (auto& r : refined)
        if (r) roots.push_back(*r);
    std::sort(roots.begin(), roots.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& r : roots) {
        bool dup = false;
        for (auto& m : merged)
            if (std::abs(r.first - m.first) <= sp.merge_tol &&
                std::abs(r.second - m.second) <= sp.merge_tol) {
                dup = true;
                break;
            }
        if (!dup) merged.push_back(r);
    }
    return merged;
}

namespace {

struct ShotRhsTheta {
    const CoefficientField& cf;
    void operator()(double theta, const std::array<double, 2>& y,
                    std::array<double, 2>& dy) const {
        double st = std::sin(theta);
        double slope = y[1] / st;
        dy[0] = slope;
        dy[1] = -(cf.f(theta, y[0], slope) / cf.a(theta, y[0], slope)) * st;
    }
};

// Richardson-style deviation of the integrated slope at eps from the series,
// starting half as close to the pole. Measures the series truncation error.
double pole_slope_residual(const ProblemSpec& spec, const CoefficientField& cf, Side side,
                           double value) {
    ShootState half = side == Side::Unstable ? init_unstable(cf, value, spec.eps_theta / 2)
                                             : init_stable(cf, value, spec.eps_theta / 2);
    ShootState full = side == Side::Unstable ? init_unstable(cf, value, spec.eps_theta)
                                             : init_stable(cf, value, spec.eps_theta);
    ShootState moved = integrate_to(cf, half, full.theta, spec.ode_tol, spec.overflow_guard);
    double st = std::sin(full.theta);
    return std::abs(moved.p / st - full.p / st);
}

}  // namespace

ProfileResult reconstruct_profile(const ProblemSpec& spec, const CoefficientField& cf,
                                  double d, double e, int grid_n) {
    ProfileResult out;
    out.u = GridFunction(grid_n);
    out.slope = GridFunction(grid_n);
    double h = out.u.h();

    IntegrateOptions opt;
    opt.tol = spec.ode_tol;
    opt.overflow_guard = spec.overflow_guard;
    ShotRhsTheta rhs{cf};

    auto series_u = [&](double pole_value, double a0, double f0, double dist) {
        return pole_value - (f0 / (4 * a0)) * dist * dist;
    };
    double a0 = cf.a(0.0, d, 0.0), f0 = cf.f(0.0, d, 0.0);
    double a1 = cf.a(M_PI, e, 0.0), f1 = cf.f(M_PI, e, 0.0);

    // forward sweep over grid nodes in [eps, theta_cut]
    ShootState s = init_unstable(cf, d, spec.eps_theta);
    std::array<double, 2> y{s.u, s.p};
    double theta = s.theta;
    for (int j = 0; j <= grid_n; ++j) {
        double tj = out.u.theta(j);
        if (tj <= spec.eps_theta) {
            out.u[j] = series_u(d, a0, f0, tj);
            out.slope[j] = -(f0 / (2 * a0)) * tj;
            continue;
        }
        if (tj > spec.theta_cut) break;
        auto res = integrate_dopri5<2>(rhs, theta, y, tj, opt);
        if (res.diverged)
            throw DivergenceError("profile shot diverged", {res.x, res.y[0], res.y[1]});
        theta = res.x;
        y = res.y;
        out.u[j] = y[0];
        out.slope[j] = y[1] / std::sin(tj);
    }
    auto fwd = integrate_dopri5<2>(rhs, theta, y, spec.theta_cut, opt);
    if (fwd.diverged) throw DivergenceError("profile shot diverged", {fwd.x, fwd.y[0], fwd.y[1]});

    // backward sweep over nodes in (theta_cut, pi - eps]
    ShootState sb = init_stable(cf, e, spec.eps_theta);
    std::array<double, 2> yb{sb.u, sb.p};
    double thetab = sb.theta;
    for (int j = grid_n; j >= 0; --j) {
        double tj = out.u.theta(j);
        if (tj >= M_PI - spec.eps_theta) {
            out.u[j] = series_u(e, a1, f1, M_PI - tj);
            out.slope[j] = (f1 / (2 * a1)) * (M_PI - tj);
            continue;
        }
        if (tj <= spec.theta_cut) break;
        auto res = integrate_dopri5<2>(rhs, thetab, yb, tj, opt);
        if (res.diverged)
            throw DivergenceError("profile shot diverged", {res.x, res.y[0], res.y[1]});
        thetab = res.x;
        yb = res.y;
        out.u[j] = yb[0];
        out.slope[j] = yb[1] / std::sin(tj);
    }
    auto bwd = integrate_dopri5<2>(rhs, thetab, yb, spec.theta_cut, opt);
    if (bwd.diverged) throw DivergenceError("profile shot diverged", {bwd.x, bwd.y[0], bwd.y[1]});

    out.joint_mismatch = std::hypot(fwd.y[0] - bwd.y[0], fwd.y[1] - bwd.y[1]);
    if (out.joint_mismatch > 10 * spec.root_tol)
        throw std::runtime_error("profile joint mismatch " +
                                 std::to_string(out.joint_mismatch) + " exceeds tolerance");
    out.neumann_residual = std::max(pole_slope_residual(spec, cf, Side::Unstable, d),
                                    pole_slope_residual(spec, cf, Side::Stable, e));
    return out;
}

Spectrum eigen_spectrum(const ProblemSpec& spec, const CoefficientField& cf, double d,
                        double e, int n_max) {
    Spectrum sp;
    double lam = spec.lambda;
    double lo = -50.0 - 10.0 * std::abs(lam);
    double hi = 10.0 + 5.0 * std::abs(lam);
    auto psi = [&](double L) { return angle_flow(spec, cf, d, e, L); };
    double psi_lo = psi(lo), psi_hi = psi(hi);
    double upper = hi, psi_upper = psi_hi;
    for (int k = 0; k <= n_max; ++k) {
        double target = k * M_PI;
        if (target > psi_lo || target < psi_upper) {
            sp.complete = false;
            break;
        }
        // psi decreasing: bracket [lo, upper] with psi(lo) >= target >= psi(upper)
        double a = lo, b = upper, pa = psi_lo, pb = psi_upper;
        for (int it = 0; it < 200 && b - a > 1e-10 * (1 + std::abs(a)); ++it) {
            double m = 0.5 * (a + b);
            double pm = psi(m);
            if (pm >= target) {
                a = m;
                pa = pm;
            } else {
                b = m;
                pb = pm;
            }
        }
        (void)pa;
        (void)pb;
        double root = 0.5 * (a + b);
        sp.eigenvalues.push_back(root);
        upper = root;  // next eigenvalue is strictly below this one
        psi_upper = target;
    }
    return sp;
}

GridFunction eigenfunction(const ProblemSpec& spec, const CoefficientField& cf, double d,
                           double e, double lambda_k, int grid_n) {
    GridFunction v(grid_n);
    IntegrateOptions opt;
    opt.tol = spec.ode_tol;
    opt.overflow_guard = 1e12;

    // state (u, p, v, w) with w = v_tau
    auto rhs = [&](double theta, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        double st = std::sin(theta);
        double slope = y[1] / st;
        double a = cf.a(theta, y[0], slope);
        double f = cf.f(theta, y[0], slope);
        double fu = cf.f_u(theta, y[0], slope);
        double fp = cf.f_p(theta, y[0], slope);
        double au = cf.a_u(theta, y[0], slope);
        double ap = cf.a_p(theta, y[0], slope);
        double b = (fu - au * f / a) * st * st;
        double c = (fp - ap * f / a) * st;
        dy[0] = slope;
        dy[1] = -(f / a) * st;
        dy[2] = y[3] / st;
        dy[3] = (-((b - lambda_k * st * st) / a) * y[2] - (c / a) * y[3]) / st;
    };

    double eps = spec.eps_theta;
    double kf = pole_curvature(cf, 0.0, d, lambda_k);
    ShootState s0 = init_unstable(cf, d, eps);
    std::array<double, 4> yf{s0.u, s0.p, 1.0 - kf * eps * eps / 4, -kf * eps * eps / 2};
    double theta = s0.theta;
    for (int j = 0; j <= grid_n; ++j) {
        double tj = v.theta(j);
        if (tj <= eps) {
            v[j] = 1.0 - kf * tj * tj / 4;
            continue;
        }
        if (tj > spec.theta_cut) break;
        auto res = integrate_dopri5<4>(rhs, theta, yf, tj, opt);
        if (res.diverged) throw std::runtime_error("eigenfunction integration diverged");
        theta = res.x;
        yf = res.y;
        v[j] = yf[2];
    }
    auto fcut = integrate_dopri5<4>(rhs, theta, yf, spec.theta_cut, opt);

    double kb = pole_curvature(cf, M_PI, e, lambda_k);
    ShootState s1 = init_stable(cf, e, eps);
    std::array<double, 4> yb{s1.u, s1.p, 1.0 - kb * eps * eps / 4, kb * eps * eps / 2};
    double thetab = s1.theta;
    std::vector<std::pair<int, double>> back_vals;
    for (int j = grid_n; j >= 0; --j) {
        double tj = v.theta(j);
        if (tj >= M_PI - eps) {
            back_vals.emplace_back(j, 1.0 - kb * (M_PI - tj) * (M_PI - tj) / 4);
            continue;
        }
        if (tj <= spec.theta_cut) break;
        auto res = integrate_dopri5<4>(rhs, thetab, yb, tj, opt);
        if (res.diverged) throw std::runtime_error("eigenfunction integration diverged");
        thetab = res.x;
        yb = res.y;
        back_vals.emplace_back(j, yb[2]);
    }
    auto bcut = integrate_dopri5<4>(rhs, thetab, yb, spec.theta_cut, opt);

    // scale the backward branch onto the forward one at the cut
    double vf = fcut.y[2], wf = fcut.y[3];
    double vb = bcut.y[2], wb = bcut.y[3];
    double den = vb * vb + wb * wb;
    if (den < 1e-24) throw std::runtime_error("eigenfunction: backward branch collapsed");
    double s = (vf * vb + wf * wb) / den;
    for (auto& [j, val] : back_vals) v[j] = s * val;

    double m = sup_norm(v);
    if (m < 1e-14) throw std::runtime_error("eigenfunction: trivial solution");
    double sign = v[0] >= 0 ? 1.0 : -1.0;
    for (auto& x : v.values) x *= sign / m;
    return v;
}

int morse_index_from_zeta(double zeta) {
    return 1 + static_cast<int>(std::floor(zeta / M_PI));
}

int morse_index(const EquilibriumRecord& rec) {
    if (!rec.hyperbolic)
        throw std::runtime_error("morse_index: equilibrium is not hyperbolic");
    return morse_index_from_zeta(rec.zeta);
}

std::vector<EquilibriumRecord> compute_equilibria(const ProblemSpec& spec, int threads) {
    CoefficientField cf = spec.field();
    SampledCurve cu = cross_section(spec, cf, Side::Unstable, spec.theta_cut, spec.d_range,
                                    spec.samples, threads);
    SampledCurve cs = cross_section(spec, cf, Side::Stable, spec.theta_cut, spec.e_range,
                                    spec.samples, threads);
    auto roots = find_intersections(cu, cs, spec, cf, threads);

    std::vector<EquilibriumRecord> recs(roots.size());
    parallel_for(roots.size(), threads, [&](std::size_t i) {
        EquilibriumRecord& r = recs[i];
        r.d = roots[i].first;
        r.e = roots[i].second;
        r.u_at_0 = r.d;
        ProfileResult prof = reconstruct_profile(spec, cf, r.d, r.e, spec.grid_n);
        r.profile = std::move(prof.u);
        r.joint_mismatch = prof.joint_mismatch;
        r.neumann_residual = prof.neumann_residual;
        TangentAngles t = tangent_angles(spec, cf, r.d, r.e);
        r.zeta = t.zeta;
        double frac = std::abs(std::remainder(r.zeta, M_PI));
        r.hyperbolic = frac > spec.angle_tol;
        r.morse_index = morse_index_from_zeta(r.zeta);
    });

    std::sort(recs.begin(), recs.end(),
              [](const EquilibriumRecord& a, const EquilibriumRecord& b) { return a.d < b.d; });
    for (std::size_t i = 0; i < recs.size(); ++i) recs[i].label_u = static_cast<int>(i) + 1;
    std::vector<std::size_t> by_e(recs.size());
    for (std::size_t i = 0; i < by_e.size(); ++i) by_e[i] = i;
    std::sort(by_e.begin(), by_e.end(),
              [&](std::size_t a, std::size_t b) { return recs[a].e < recs[b].e; });
    for (std::size_t pos = 0; pos < by_e.size(); ++pos)
        recs[by_e[pos]].label_s = static_cast<int>(pos) + 1;
    return recs;
}

}  // namespace sturm
