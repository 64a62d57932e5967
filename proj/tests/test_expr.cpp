// Expression DSL: parsing, evaluation, symbolic differentiation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sturm/expr.hpp"

using namespace sturm;

TEST_CASE("cubic reaction evaluates by direct arithmetic") {
    Expression f = Expression::parse("lambda*u*(1-u^2)");
    EvalPoint pt;
    pt.u = 0.5;
    pt.lambda = 2.0;
    CHECK(f.eval(pt) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("builtin functions at known points") {
    CHECK(Expression::parse("sin(theta)").eval({0.0, 0, 0, 0}) == 0.0);
    CHECK(Expression::parse("cos(theta)").eval({0.0, 0, 0, 0}) == 1.0);
    CHECK(Expression::parse("exp(u)").eval({0, 1.0, 0, 0}) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(Expression::parse("ln(u)").eval({0, std::exp(2.0), 0, 0}) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(Expression::parse("abs(p)").eval({0, 0, -3.5, 0}) == 3.5);
    CHECK(Expression::parse("tan(theta)").eval({M_PI / 4, 0, 0, 0}) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator precedence and parentheses") {
    CHECK(Expression::parse("2+3*4").eval({}) == 14.0);
    CHECK(Expression::parse("(2+3)*4").eval({}) == 20.0);
    CHECK(Expression::parse("2*3^2").eval({}) == 18.0);
    CHECK(Expression::parse("7-4-2").eval({}) == 1.0);  // left associative
    CHECK(Expression::parse("8/4/2").eval({}) == 1.0);
}

TEST_CASE("malformed input reports the byte offset") {
    CHECK_THROWS_AS(Expression::parse("u*(1-"), ParseError);
    try {
        Expression::parse("u*(1-");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 5);
    }
    CHECK_THROWS_AS(Expression::parse(""), ParseError);
    CHECK_THROWS_AS(Expression::parse("1+*2"), ParseError);
}

TEST_CASE("unknown identifiers are rejected at parse time") {
    CHECK_THROWS_AS(Expression::parse("foo+1"), ParseError);
    CHECK_THROWS_AS(Expression::parse("sinh(u)"), ParseError);
}

TEST_CASE("division by zero surfaces at evaluation, not parse") {
    Expression e = Expression::parse("1/u");
    CHECK(e.eval({0, 2.0, 0, 0}) == 0.5);
    double v = e.eval({0, 0.0, 0, 0});
    CHECK(!std::isfinite(v));
}

TEST_CASE("DSL matches a hand-coded closure on 1000 random samples") {
    Expression f = Expression::parse("lambda*u*(1-u^2)");
    auto closure = [](double, double u, double, double lam) { return lam * u * (1 - u * u); };
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        EvalPoint pt{dist(rng), dist(rng), dist(rng), dist(rng)};
        double want = closure(pt.theta, pt.u, pt.p, pt.lambda);
        double got = f.eval(pt);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("symbolic derivative matches central finite differences") {
    Expression f = Expression::parse("lambda*u*(1-u^2) + sin(theta)*p + exp(u*p/10)");
    REQUIRE(f.symbolic_differentiable());
    Expression fu = f.derivative("u");
    Expression fp = f.derivative("p");
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        EvalPoint pt{std::abs(dist(rng)) + 0.1, dist(rng), dist(rng), dist(rng)};
        EvalPoint up = pt, dn = pt;
        up.u += h;
        dn.u -= h;
        double fd_u = (f.eval(up) - f.eval(dn)) / (2 * h);
        CHECK(std::abs(fu.eval(pt) - fd_u) <= 1e-6 * std::max(1.0, std::abs(fd_u)));
        up = dn = pt;
        up.p += h;
        dn.p -= h;
        double fd_p = (f.eval(up) - f.eval(dn)) / (2 * h);
        CHECK(std::abs(fp.eval(pt) - fd_p) <= 1e-6 * std::max(1.0, std::abs(fd_p)));
    }
}

TEST_CASE("derivative rules on simple trees") {
    CHECK(Expression::parse("u^3").derivative("u").eval({0, 2, 0, 0}) == 12.0);
    CHECK(Expression::parse("sin(u)").derivative("u").eval({0, 0, 0, 0}) == 1.0);
    CHECK(Expression::parse("lambda*p").derivative("p").eval({0, 0, 0, 4.0}) == 4.0);
    CHECK(Expression::parse("theta").derivative("u").eval({1, 1, 1, 1}) == 0.0);
}

TEST_CASE("abs blocks symbolic differentiation but still evaluates") {
    Expression e = Expression::parse("abs(u)+1");
    CHECK(!e.symbolic_differentiable());
    CHECK(e.eval({0, -2, 0, 0}) == 3.0);
    CHECK_THROWS_AS(e.derivative("u"), std::runtime_error);
}

TEST_CASE("printed form reparses to an equivalent expression") {
    Expression e = Expression::parse("lambda*u*(1-u^2) + sin(theta)*p");
    Expression r = Expression::parse(e.to_string());
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        EvalPoint pt{dist(rng), dist(rng), dist(rng), dist(rng)};
        CHECK(e.eval(pt) == doctest::Approx(r.eval(pt)).epsilon(1e-14));
    }
}
