#include "sturm/connections.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sturm {

namespace {

constexpr double kTieTol = 1e-8;

// labels strictly between j and k in the u(0)-ordering
std::vector<int> between_at_pole(int j, int k, const std::vector<EquilibriumRecord>& recs) {
    double a = recs[j - 1].u_at_0, b = recs[k - 1].u_at_0;
    double lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo <= kTieTol)
        throw std::runtime_error("connections: u(0) tie between labels " + std::to_string(j) +
                                 " and " + std::to_string(k));
    std::vector<int> out;
    for (int m = 1; m <= static_cast<int>(recs.size()); ++m) {
        if (m == j || m == k) continue;
        double v = recs[m - 1].u_at_0;
        if (std::abs(v - lo) <= kTieTol || std::abs(v - hi) <= kTieTol)
            throw std::runtime_error("connections: u(0) tie at label " + std::to_string(m));
        if (v > lo && v < hi) out.push_back(m);
    }
    return out;
}

int z_entry(int a, int b, const ZeroNumberTable& zt) {
    if (zt.flagged[a - 1][b - 1])
        throw std::runtime_error("connections: indeterminate zero number for pair (" +
                                 std::to_string(a) + ", " + std::to_string(b) + ")");
    return zt.z[a - 1][b - 1];
}

bool blocked(int j, int k, const std::vector<EquilibriumRecord>& recs,
             const ZeroNumberTable& zt) {
    for (int m : between_at_pole(j, k, recs))
        if (z_entry(j, m, zt) == z_entry(k, m, zt)) return true;
    return false;
}

}  // namespace

bool ConnectionGraph::has_edge(int from, int to) const {
    return std::find(edges.begin(), edges.end(), std::make_pair(from, to)) != edges.end();
}

bool adjacent(int j, int k, const std::vector<EquilibriumRecord>& records,
              const ZeroNumberTable& ztable) {
    if (j == k) throw std::invalid_argument("adjacent: labels must differ");
    return !blocked(j, k, records, ztable);
}

ConnectionGraph heteroclinic_edges(const std::vector<EquilibriumRecord>& records,
                                   const ZeroNumberTable& ztable) {
    ConnectionGraph g;
    g.n = static_cast<int>(records.size());
    for (const auto& r : records) g.morse.push_back(r.morse_index);
    for (int j = 1; j <= g.n; ++j)
        for (int k = 1; k <= g.n; ++k) {
            if (j == k || records[j - 1].morse_index <= records[k - 1].morse_index) continue;
            if (adjacent(j, k, records, ztable)) g.edges.emplace_back(j, k);
        }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

bool cascadly_adjacent(int j, int k, const std::vector<EquilibriumRecord>& records,
                       const ZeroNumberTable& ztable) {
    int ij = records[j - 1].morse_index, ik = records[k - 1].morse_index;
    if (ij <= ik)
        throw std::invalid_argument("cascadly_adjacent: requires i(j) > i(k)");
    // climb from k toward j one index level at a time
    std::vector<int> stack{k};
    std::vector<std::vector<int>> path_stack{{k}};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        std::vector<int> path = path_stack.back();
        path_stack.pop_back();
        int iv = records[v - 1].morse_index;
        if (v == j) return true;
        if (iv >= ij) continue;
        for (int w = 1; w <= static_cast<int>(records.size()); ++w) {
            if (w == v) continue;
            if (records[w - 1].morse_index != iv + 1) continue;
            if (w != j && records[w - 1].morse_index > ij) continue;
            if (z_entry(w, v, ztable) != iv) continue;  // Morse permit
            if (blocked(w, v, records, ztable)) continue;  // zero number permit
            if (std::find(path.begin(), path.end(), w) != path.end()) continue;
            stack.push_back(w);
            auto np = path;
            np.push_back(w);
            path_stack.push_back(np);
        }
    }
    return false;
}

std::string to_dot(const ConnectionGraph& graph) {
    std::ostringstream out;
    out << "digraph attractor {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=circle];\n";
    std::map<int, std::vector<int>, std::greater<int>> by_index;
    for (int v = 1; v <= graph.n; ++v) by_index[graph.morse[v - 1]].push_back(v);
    for (auto& [idx, nodes] : by_index) {
        out << "  { rank=same;";
        for (int v : nodes) out << " e" << v << " [label=\"" << v << " (i=" << idx << ")\"];";
        out << " }\n";
    }
    for (auto& [from, to] : graph.edges) out << "  e" << from << " -> e" << to << ";\n";
    out << "}\n";
    return out.str();
}

bool is_graded_acyclic(const ConnectionGraph& graph) {
    for (auto& [from, to] : graph.edges)
        if (graph.morse[from - 1] <= graph.morse[to - 1]) return false;
    return true;  // strict index decrease along every edge forbids cycles
}

}  // namespace sturm
