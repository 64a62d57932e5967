// Heteroclinic connection graph: the blocking-based adjacency rule, the
// cascade construction as an independent check, and DOT export.
#ifndef STURM_CONNECTIONS_HPP
#define STURM_CONNECTIONS_HPP

#include <string>
#include <utility>
#include <vector>

#include "sturm/permutation.hpp"

namespace sturm {

struct ConnectionGraph {
    int n = 0;
    std::vector<int> morse;                       // morse[label-1]
    std::vector<std::pair<int, int>> edges;       // (from, to), 1-based labels

    bool has_edge(int from, int to) const;
};

// True iff no equilibrium m with u_m(0) strictly between u_j(0) and u_k(0)
// has z[j][m] == z[k][m]. Labels are 1-based d-ranks; records must be sorted
// by d. Throws on indeterminate (flagged) z entries and on u(0) ties.
bool adjacent(int j, int k, const std::vector<EquilibriumRecord>& records,
              const ZeroNumberTable& ztable);

// Edge (j -> k) iff adjacent and i_j > i_k.
ConnectionGraph heteroclinic_edges(const std::vector<EquilibriumRecord>& records,
                                   const ZeroNumberTable& ztable);

// Depth-first search for a cascade u_k = v_0, ..., v_m = u_j with unit index
// increments, the zero-number permit z(v_{r+1} - v_r) = i(v_r), and no
// blocking equilibrium between consecutive members at theta = 0.
bool cascadly_adjacent(int j, int k, const std::vector<EquilibriumRecord>& records,
                       const ZeroNumberTable& ztable);

// Deterministic DOT document, ranked by Morse index (highest on top).
std::string to_dot(const ConnectionGraph& graph);

// Every directed path strictly decreases the Morse index.
bool is_graded_acyclic(const ConnectionGraph& graph);

}  // namespace sturm

#endif
