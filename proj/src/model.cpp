#include "sturm/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sturm {

namespace {

CoefficientField::Fn bind_expr(const Expression& e, double lambda) {
    return [e, lambda](double theta, double u, double p) {
        return e.eval({theta, u, p, lambda});
    };
}

// Central difference in one slot of (u, p) with u-scaled step.
CoefficientField::Fn fd_derivative(const Expression& e, double lambda, bool wrt_u,
                                   double h_fd) {
    return [e, lambda, wrt_u, h_fd](double theta, double u, double p) {
        double h = h_fd * std::max(1.0, std::abs(u));
        EvalPoint hi{theta, u, p, lambda}, lo{theta, u, p, lambda};
        if (wrt_u) {
            hi.u += h;
            lo.u -= h;
        } else {
            hi.p += h;
            lo.p -= h;
        }
        return (e.eval(hi) - e.eval(lo)) / (2 * h);
    };
}

}  // namespace

CoefficientField CoefficientField::from_expressions(const Expression& a,
                                                    const Expression& f, double lambda,
                                                    double h_fd) {
    CoefficientField cf;
    cf.a_ = bind_expr(a, lambda);
    cf.f_ = bind_expr(f, lambda);
    bool symbolic = a.symbolic_differentiable() && f.symbolic_differentiable();
    if (symbolic) {
        cf.df_du_ = bind_expr(f.derivative("u"), lambda);
        cf.df_dp_ = bind_expr(f.derivative("p"), lambda);
        cf.da_du_ = bind_expr(a.derivative("u"), lambda);
        cf.da_dp_ = bind_expr(a.derivative("p"), lambda);
    } else {
        cf.df_du_ = fd_derivative(f, lambda, true, h_fd);
        cf.df_dp_ = fd_derivative(f, lambda, false, h_fd);
        cf.da_du_ = fd_derivative(a, lambda, true, h_fd);
        cf.da_dp_ = fd_derivative(a, lambda, false, h_fd);
    }
    cf.symbolic_ = symbolic;
    return cf;
}

void ProblemSpec::validate() const {
    if (f_text.empty()) throw std::invalid_argument("missing reaction expression f");
    if (!(eps_theta > 0 && eps_theta < M_PI / 4))
        throw std::invalid_argument("eps_theta must lie in (0, pi/4)");
    if (!(ode_tol > 0)) throw std::invalid_argument("ode_tol must be positive");
    if (grid_n < 16) throw std::invalid_argument("grid_n must be at least 16");
    if (!(d_range.lo < d_range.hi) || !(e_range.lo < e_range.hi))
        throw std::invalid_argument("empty shooting parameter range");
    if (samples < 64) throw std::invalid_argument("samples must be at least 64");
    if (!(theta_cut > eps_theta && theta_cut < M_PI - eps_theta))
        throw std::invalid_argument("theta_cut outside (eps_theta, pi - eps_theta)");
}

CoefficientField ProblemSpec::field_at(double lambda_value) const {
    Expression a = Expression::parse(a_text);
    Expression f = Expression::parse(f_text);
    return CoefficientField::from_expressions(a, f, lambda_value, h_fd);
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used])))
            ++used;
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ProblemSpec parse_problem_spec(const std::string& text) {
    ProblemSpec spec;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    bool have_f = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (section == "problem") {
            if (key == "a") spec.a_text = value;
            else if (key == "f") { spec.f_text = value; have_f = true; }
            else if (key == "lambda") spec.lambda = parse_double(key, value);
            else throw std::invalid_argument("config: unknown key [problem] " + key);
        } else if (section == "numerics") {
            if (key == "eps_theta") spec.eps_theta = parse_double(key, value);
            else if (key == "ode_tol") spec.ode_tol = parse_double(key, value);
            else if (key == "grid_n") spec.grid_n = static_cast<int>(parse_double(key, value));
            else if (key == "d_min") spec.d_range.lo = parse_double(key, value);
            else if (key == "d_max") spec.d_range.hi = parse_double(key, value);
            else if (key == "e_min") { spec.e_range.lo = parse_double(key, value); }
            else if (key == "e_max") { spec.e_range.hi = parse_double(key, value); }
            else if (key == "samples") spec.samples = static_cast<int>(parse_double(key, value));
            else if (key == "seed") spec.seed = static_cast<unsigned>(parse_double(key, value));
            else if (key == "theta_cut") spec.theta_cut = parse_double(key, value);
            else if (key == "root_tol") spec.root_tol = parse_double(key, value);
            else if (key == "merge_tol") spec.merge_tol = parse_double(key, value);
            else if (key == "angle_tol") spec.angle_tol = parse_double(key, value);
            else if (key == "conv_tol") spec.conv_tol = parse_double(key, value);
            else throw std::invalid_argument("config: unknown key [numerics] " + key);
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside a known section");
        }
    }
    // e-range defaults to the d-range unless given explicitly
    if (spec.e_range.lo == -1.5 && spec.e_range.hi == 1.5) spec.e_range = spec.d_range;
    if (!have_f) throw std::invalid_argument("config: missing [problem] f");
    spec.validate();
    // fail early on malformed expressions
    (void)spec.field();
    return spec;
}

ProblemSpec load_problem_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem_spec(buf.str());
}

DissipativityReport check_dissipativity(const ProblemSpec& spec, const SampleBox& box) {
    DissipativityReport rep;
    CoefficientField cf = spec.field();

    auto record_failure = [](ConditionResult& c, double theta, double u, double p,
                             double value, const std::string& note) {
        if (c.holds) {
            c.holds = false;
            c.has_counterexample = true;
            c.theta = theta;
            c.u = u;
            c.p = p;
            c.value = value;
            c.note = note;
        }
    };

    rep.growth_condition.checkable = false;
    rep.growth_condition.note =
        "growth exponent gamma < 2 involves unknown comparison functions; "
        "recorded as a documentation note, finiteness of f checked on samples";

    auto grid = [](const Interval& iv, int n, int i) {
        return n <= 1 ? iv.lo : iv.lo + (iv.hi - iv.lo) * i / (n - 1);
    };

    for (int it = 0; it < box.n_theta; ++it) {
        double theta = grid(box.theta, box.n_theta, it);
        for (int iu = 0; iu < box.n_u; ++iu) {
            double u = grid(box.u, box.n_u, iu);
            for (int ip = 0; ip < box.n_p; ++ip) {
                double p = grid(box.p, box.n_p, ip);
                double av = cf.a(theta, u, p);
                if (!std::isfinite(av) || av < box.parabolic_min)
                    record_failure(rep.parabolicity, theta, u, p, av,
                                   "a below parabolicity floor");
                double fv = cf.f(theta, u, p);
                if (!std::isfinite(fv))
                    record_failure(rep.growth_condition, theta, u, p, fv, "f not finite");
                double au = cf.a_u(theta, u, p);
                double ap = cf.a_p(theta, u, p);
                if (!std::isfinite(au) || !std::isfinite(ap))
                    record_failure(rep.coeff_bounds, theta, u, p,
                                   std::isfinite(au) ? ap : au,
                                   "coefficient derivative not finite");
                if (ip == 0 && std::abs(u) >= box.sign_threshold) {
                    double s = cf.f(theta, u, 0.0) * u;
                    if (!(s < 0))
                        record_failure(rep.sign_condition, theta, u, 0.0, s,
                                       "f(theta,u,0)*u not strictly negative");
                }
            }
        }
    }
    if (!rep.growth_condition.has_counterexample) rep.growth_condition.holds = true;
    return rep;
}

}  // namespace sturm
