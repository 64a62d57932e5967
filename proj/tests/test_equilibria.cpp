// Equilibrium pipeline: intersections, profiles, tangent angles, spectra,
// Morse indices, hyperbolicity.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sturm/equilibria.hpp"
#include "sturm/permutation.hpp"

using namespace sturm;

namespace {

ProblemSpec cubic_spec(double lambda) {
    ProblemSpec spec;
    spec.a_text = "1";
    spec.f_text = "lambda*u*(1-u^2)";
    spec.lambda = lambda;
    return spec;
}

std::vector<std::pair<double, double>> roots_at(const ProblemSpec& spec, double theta_cut) {
    CoefficientField cf = spec.field();
    ProblemSpec s = spec;
    s.theta_cut = theta_cut;
    SampledCurve cu = cross_section(s, cf, Side::Unstable, theta_cut, s.d_range, s.samples, 4);
    SampledCurve cs = cross_section(s, cf, Side::Stable, theta_cut, s.e_range, s.samples, 4);
    return find_intersections(cu, cs, s, cf, 4);
}

}  // namespace

TEST_CASE("root counts grow in steps of two with the reaction strength") {
    auto r1 = roots_at(cubic_spec(1.0), M_PI / 2);
    REQUIRE(r1.size() == 3);
    // constants and the trivial state, in d-order
    CHECK(r1[0].first == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(r1[0].second == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::abs(r1[1].first) < 1e-8);
    CHECK(std::abs(r1[1].second) < 1e-8);
    CHECK(r1[2].first == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r1[2].second == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(roots_at(cubic_spec(3.0), M_PI / 2).size() == 5);
    CHECK(roots_at(cubic_spec(7.0), M_PI / 2).size() == 7);
}

TEST_CASE("root count is independent of the cut angle") {
    ProblemSpec spec = cubic_spec(3.0);
    for (double cut : {M_PI / 3, M_PI / 2, 2 * M_PI / 3})
        CHECK(roots_at(spec, cut).size() == 5);
}

TEST_CASE("profile reconstruction: constants, interior sign changes, reflections") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();

    ProfileResult flat = reconstruct_profile(spec, cf, 1.0, 1.0, spec.grid_n);
    for (int j = 0; j <= flat.u.n; ++j) CHECK(std::abs(flat.u[j] - 1.0) < 1e-8);
    CHECK(flat.joint_mismatch <= 10 * spec.root_tol);
    CHECK(flat.neumann_residual <= 1e-8);

    auto roots = roots_at(spec, M_PI / 2);
    REQUIRE(roots.size() == 5);
    // d-order: -1, pair member, 0, pair member, +1
    ProfileResult plus = reconstruct_profile(spec, cf, roots[3].first, roots[3].second,
                                             spec.grid_n);
    CHECK(zero_number(plus.u) == 1);  // one interior sign change
    CHECK(plus.joint_mismatch <= 10 * spec.root_tol);
    CHECK(plus.neumann_residual <= 1e-8);

    ProfileResult minus = reconstruct_profile(spec, cf, roots[1].first, roots[1].second,
                                              spec.grid_n);
    for (int j = 0; j <= plus.u.n; ++j)
        CHECK(std::abs(plus.u[j] + minus.u[j]) < 1e-6);  // reflection pair
}

TEST_CASE("mismatched shooting parameters are rejected at reconstruction") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();
    CHECK_THROWS_AS(reconstruct_profile(spec, cf, 0.5, 0.5, spec.grid_n),
                    std::runtime_error);
}

TEST_CASE("tangent angle bands give the expected instability counts") {
    ProblemSpec s1 = cubic_spec(1.0);
    TangentAngles t = tangent_angles(s1, s1.field(), 0.0, 0.0);
    CHECK(t.zeta == doctest::Approx(t.nu - t.nu_tilde).epsilon(1e-12));
    CHECK(t.zeta > 0.0);
    CHECK(t.zeta < M_PI);
    CHECK(morse_index_from_zeta(t.zeta) == 1);

    ProblemSpec s3 = cubic_spec(3.0);
    t = tangent_angles(s3, s3.field(), 0.0, 0.0);
    CHECK(t.zeta > M_PI);
    CHECK(t.zeta < 2 * M_PI);
    CHECK(morse_index_from_zeta(t.zeta) == 2);

    t = tangent_angles(s3, s3.field(), 1.0, 1.0);  // stable constant
    CHECK(t.zeta < 0.0);
    CHECK(t.zeta > -M_PI);
    CHECK(morse_index_from_zeta(t.zeta) == 0);
}

TEST_CASE("tangent angle agrees with a finite-difference curve tangent") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();
    auto roots = roots_at(spec, M_PI / 2);
    const double dd = 1e-5;
    for (const auto& [d, e] : roots) {
        TangentAngles t = tangent_angles(spec, cf, d, e);
        ShootState lo = integrate_to(cf, init_unstable(cf, d - dd, spec.eps_theta),
                                     spec.theta_cut, spec.ode_tol);
        ShootState hi = integrate_to(cf, init_unstable(cf, d + dd, spec.eps_theta),
                                     spec.theta_cut, spec.ode_tol);
        double fd_angle = std::atan2(-(hi.p - lo.p), hi.u - lo.u);
        double diff = std::remainder(t.nu - fd_angle, M_PI);
        CHECK(std::abs(diff) < 1e-4);
    }
}

TEST_CASE("spectrum at the trivial and constant states matches closed forms") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();

    Spectrum s0 = eigen_spectrum(spec, cf, 0.0, 0.0, 3);
    REQUIRE(s0.complete);
    REQUIRE(s0.eigenvalues.size() == 4);
    // linearization at the trivial state: lambda - k(k+1)
    for (int k = 0; k <= 3; ++k)
        CHECK(s0.eigenvalues[k] == doctest::Approx(3.0 - k * (k + 1)).epsilon(1e-6));

    Spectrum s1 = eigen_spectrum(spec, cf, 1.0, 1.0, 2);
    REQUIRE(s1.eigenvalues.size() == 3);
    // linearization at a constant state: -2 lambda - k(k+1)
    for (int k = 0; k <= 2; ++k)
        CHECK(s1.eigenvalues[k] == doctest::Approx(-6.0 - k * (k + 1)).epsilon(1e-6));
}

TEST_CASE("positive eigenvalue count equals the angle-based index") {
    ProblemSpec spec = cubic_spec(7.0);
    CoefficientField cf = spec.field();
    auto recs = compute_equilibria(spec, 4);
    REQUIRE(recs.size() == 7);
    for (const auto& r : recs) {
        Spectrum s = eigen_spectrum(spec, cf, r.d, r.e, 4);
        int positive = 0;
        for (double ev : s.eigenvalues)
            if (ev > 0) ++positive;
        CHECK(positive == r.morse_index);
    }
}

TEST_CASE("index vectors in d-order") {
    auto idx = [](double lambda) {
        std::vector<int> v;
        for (const auto& r : compute_equilibria(cubic_spec(lambda), 4))
            v.push_back(r.morse_index);
        return v;
    };
    CHECK(idx(1.0) == std::vector<int>{0, 1, 0});
    CHECK(idx(3.0) == std::vector<int>{0, 1, 2, 1, 0});
    CHECK(idx(7.0) == std::vector<int>{0, 1, 2, 3, 2, 1, 0});
}

TEST_CASE("all equilibria are transversal at interval midpoints") {
    for (double lambda : {1.0, 3.0, 7.0}) {
        auto recs = compute_equilibria(cubic_spec(lambda), 4);
        for (const auto& r : recs) {
            CHECK(r.hyperbolic);
            CHECK(std::abs(std::remainder(r.zeta, M_PI)) > 0.1);
        }
    }
}

TEST_CASE("near a branch point the trivial angle crosses a multiple of pi") {
    ProblemSpec below = cubic_spec(5.95);
    ProblemSpec above = cubic_spec(6.05);
    TangentAngles tb = tangent_angles(below, below.field(), 0.0, 0.0);
    TangentAngles ta = tangent_angles(above, above.field(), 0.0, 0.0);
    CHECK(std::abs(std::remainder(tb.zeta, M_PI)) < 0.2);
    CHECK(std::abs(std::remainder(ta.zeta, M_PI)) < 0.2);
    CHECK(ta.zeta > tb.zeta);                   // angle grows with the parameter
    CHECK(std::floor(tb.zeta / M_PI) == 1.0);   // crosses 2 pi between the two
    CHECK(std::floor(ta.zeta / M_PI) == 2.0);
}

TEST_CASE("spectra of reflection partners coincide") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();
    auto recs = compute_equilibria(spec, 4);
    REQUIRE(recs.size() == 5);
    Spectrum sp = eigen_spectrum(spec, cf, recs[3].d, recs[3].e, 2);
    Spectrum sm = eigen_spectrum(spec, cf, recs[1].d, recs[1].e, 2);
    REQUIRE(sp.eigenvalues.size() == sm.eigenvalues.size());
    for (std::size_t k = 0; k < sp.eigenvalues.size(); ++k)
        CHECK(std::abs(sp.eigenvalues[k] - sm.eigenvalues[k]) < 1e-6);
}

TEST_CASE("eigenfunctions are sup-normalized with a positive start") {
    ProblemSpec spec = cubic_spec(3.0);
    CoefficientField cf = spec.field();
    Spectrum s0 = eigen_spectrum(spec, cf, 0.0, 0.0, 1);
    for (int k = 0; k <= 1; ++k) {
        GridFunction phi = eigenfunction(spec, cf, 0.0, 0.0, s0.eigenvalues[k], spec.grid_n);
        CHECK(sup_norm(phi) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(phi[0] > 0.0);
        CHECK(zero_number(phi) == k);  // k-th mode has k interior sign changes
        // trivial-state eigenfunctions are polynomial in cos(theta): compare mode shapes
        for (int j = 0; j <= phi.n; ++j) {
            double x = std::cos(phi.theta(j));
            double want = k == 0 ? 1.0 : x;
            CHECK(std::abs(phi[j] - want) < 1e-6);
        }
    }
}

TEST_CASE("record metadata: labels, ordering, residuals") {
    ProblemSpec spec = cubic_spec(3.0);
    auto recs = compute_equilibria(spec, 4);
    REQUIRE(recs.size() == 5);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].label_u == static_cast<int>(i) + 1);
        CHECK(recs[i].u_at_0 == doctest::Approx(recs[i].d).epsilon(1e-6));
        CHECK(recs[i].joint_mismatch <= 10 * spec.root_tol);
        CHECK(recs[i].neumann_residual <= 1e-8);
        if (i > 0) CHECK(recs[i].d > recs[i - 1].d);
    }
    std::vector<int> label_s;
    for (const auto& r : recs) label_s.push_back(r.label_s);
    CHECK(label_s == std::vector<int>{1, 4, 3, 2, 5});
}

TEST_CASE("refined polylines subdivide long segments inside the window") {
    ProblemSpec spec = cubic_spec(20.5);
    CoefficientField cf = spec.field();
    SampledCurve coarse = cross_section(spec, cf, Side::Unstable, spec.theta_cut,
                                        spec.d_range, spec.samples, 4);
    CurvePolyline fine = refine_cross_section(spec, cf, coarse, 4.5, 0.2, 4);
    CHECK(fine.params.size() > coarse.params.size());
    for (std::size_t i = 1; i < fine.params.size(); ++i)
        CHECK(fine.params[i] > fine.params[i - 1]);
}

TEST_CASE("steep curves at strong reaction still yield the full equilibrium set") {
    auto recs13 = compute_equilibria(cubic_spec(13.0), 4);
    CHECK(recs13.size() == 9);
    auto recs20 = compute_equilibria(cubic_spec(20.5), 4);
    CHECK(recs20.size() == 11);
}
