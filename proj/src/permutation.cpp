#include "sturm/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sturm/parallel.hpp"

namespace sturm {

std::vector<int> SturmPermutation::inverse() const {
    std::vector<int> inv(n + 1, 0);
    for (int m = 1; m <= n; ++m) inv[sigma[m - 1]] = m;
    return std::vector<int>(inv.begin() + 1, inv.end());
}

std::string SturmPermutation::cycles() const {
    std::vector<bool> seen(n + 1, false);
    std::string out;
    for (int start = 1; start <= n; ++start) {
        if (seen[start] || sigma[start - 1] == start) continue;
        std::string cyc = "(" + std::to_string(start);
        seen[start] = true;
        for (int m = sigma[start - 1]; m != start; m = sigma[m - 1]) {
            seen[m] = true;
            cyc += " " + std::to_string(m);
        }
        out += cyc + ")";
    }
    return out.empty() ? "id" : out;
}

SturmPermutation build_permutation(const std::vector<EquilibriumRecord>& records,
                                   double merge_tol) {
    SturmPermutation perm;
    perm.n = static_cast<int>(records.size());
    if (perm.n == 0) return perm;

    std::vector<std::size_t> by_d(records.size()), by_e(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) by_d[i] = by_e[i] = i;
    std::sort(by_d.begin(), by_d.end(),
              [&](std::size_t a, std::size_t b) { return records[a].d < records[b].d; });
    std::sort(by_e.begin(), by_e.end(),
              [&](std::size_t a, std::size_t b) { return records[a].e < records[b].e; });

    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        double gd = records[by_d[i + 1]].d - records[by_d[i]].d;
        double ge = records[by_e[i + 1]].e - records[by_e[i]].e;
        if (gd <= merge_tol || ge <= merge_tol)
            throw std::runtime_error(
                "build_permutation: ambiguous labeling, parameter gap below merge_tol "
                "between records " + std::to_string(i) + " and " + std::to_string(i + 1));
    }
    for (const auto& r : records)
        if (!r.hyperbolic)
            throw std::runtime_error("build_permutation: non-hyperbolic equilibrium d=" +
                                     std::to_string(r.d));

    std::vector<int> d_label(records.size());
    for (std::size_t pos = 0; pos < by_d.size(); ++pos)
        d_label[by_d[pos]] = static_cast<int>(pos) + 1;
    perm.sigma.resize(records.size());
    for (std::size_t pos = 0; pos < by_e.size(); ++pos)
        perm.sigma[pos] = d_label[by_e[pos]];

    std::vector<bool> hit(perm.n + 1, false);
    for (int v : perm.sigma) {
        if (v < 1 || v > perm.n || hit[v])
            throw std::runtime_error("build_permutation: sigma is not a bijection");
        hit[v] = true;
    }
    if (perm.sigma.front() != 1 || perm.sigma.back() != perm.n)
        perm.warnings.push_back(
            "sigma does not fix the endpoints; e-orientation may be reversed");
    return perm;
}

int zero_number(const GridFunction& g, double zero_eps) {
    if (zero_eps <= 0) zero_eps = 1e-9 * sup_norm(g);
    int count = 0, last_sign = 0;
    bool any = false;
    for (double v : g.values) {
        if (std::abs(v) < zero_eps || v == 0.0) continue;
        any = true;
        int s = v > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++count;
        last_sign = s;
    }
    return any ? count : -1;
}

namespace {

bool near_tangency(const GridFunction& g, double zero_eps) {
    double h = g.h();
    for (int j = 1; j < g.n; ++j) {
        double gt = (g[j + 1] - g[j - 1]) / (2 * h);
        if (std::abs(g[j]) < zero_eps && std::abs(gt) < zero_eps) return true;
    }
    return false;
}

GridFunction diff(const GridFunction& a, const GridFunction& b) {
    GridFunction d(a.n);
    for (int j = 0; j <= a.n; ++j) d[j] = a[j] - b[j];
    return d;
}

}  // namespace

ZeroNumberTable zero_number_table(const std::vector<EquilibriumRecord>& records,
                                  const ProblemSpec& spec, int threads) {
    ZeroNumberTable t;
    t.n = static_cast<int>(records.size());
    t.z.assign(t.n, std::vector<int>(t.n, -1));
    t.flagged.assign(t.n, std::vector<bool>(t.n, false));
    if (t.n < 2) return t;
    CoefficientField cf = spec.field();

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < t.n; ++i)
        for (int j = i + 1; j < t.n; ++j) pairs.emplace_back(i, j);

    parallel_for(pairs.size(), threads, [&](std::size_t idx) {
        auto [i, j] = pairs[idx];
        GridFunction g = diff(records[i].profile, records[j].profile);
        double zero_eps = 1e-9 * sup_norm(g);
        if (zero_eps > 0 && near_tangency(g, zero_eps)) {
            GridFunction fi =
                reconstruct_profile(spec, cf, records[i].d, records[i].e, 4 * spec.grid_n).u;
            GridFunction fj =
                reconstruct_profile(spec, cf, records[j].d, records[j].e, 4 * spec.grid_n).u;
            g = diff(fi, fj);
            zero_eps = 1e-9 * sup_norm(g);
            if (zero_eps > 0 && near_tangency(g, zero_eps)) {
                t.flagged[i][j] = t.flagged[j][i] = true;
            }
        }
        t.z[i][j] = t.z[j][i] = zero_number(g, zero_eps);
    });
    return t;
}

std::vector<int> morse_from_permutation(const SturmPermutation& sigma) {
    std::vector<int> inv = sigma.inverse();
    std::vector<int> idx(sigma.n, 0);
    for (int m = 1; m < sigma.n; ++m) {
        int step = inv[m] < inv[m - 1] ? -1 : 1;  // inv is 0-based over labels m, m+1
        int sgn = (m % 2 == 1) ? 1 : -1;          // (-1)^{m+1} with 1-based m
        idx[m] = idx[m - 1] + sgn * step;
        if (idx[m] < 0)
            throw std::runtime_error("morse_from_permutation: not a Sturm permutation");
    }
    if (!idx.empty() && idx.back() != 0)
        throw std::runtime_error("morse_from_permutation: not a Sturm permutation");
    return idx;
}

}  // namespace sturm
