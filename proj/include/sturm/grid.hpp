// Uniform theta-grid functions on [0, pi] and the sin-weighted L2 norm.
#ifndef STURM_GRID_HPP
#define STURM_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sturm {

// Values on the uniform grid theta_j = pi j / n, j = 0..n.
struct GridFunction {
    int n = 0;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(int n, double fill = 0.0) : n(n), values(n + 1, fill) {
        if (n < 1) throw std::invalid_argument("GridFunction: n must be positive");
    }

    double h() const { return M_PI / n; }
    double theta(int j) const { return M_PI * j / n; }
    std::size_t size() const { return values.size(); }
    double& operator[](int j) { return values[j]; }
    double operator[](int j) const { return values[j]; }
};

// ||u||_w = sqrt(sum u_j^2 sin(theta_j) h); the pole nodes carry zero weight.
inline double norm_w(const GridFunction& u) {
    double s = 0.0;
    for (int j = 0; j <= u.n; ++j) {
        double v = u.values[j];
        s += v * v * std::sin(u.theta(j));
    }
    return std::sqrt(s * u.h());
}

inline double dist_w(const GridFunction& a, const GridFunction& b) {
    if (a.n != b.n) throw std::invalid_argument("dist_w: grid mismatch");
    GridFunction d(a.n);
    for (int j = 0; j <= a.n; ++j) d.values[j] = a.values[j] - b.values[j];
    return norm_w(d);
}

inline double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace sturm

#endif
