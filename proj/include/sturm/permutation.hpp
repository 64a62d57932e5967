// The combinatorial core: the permutation relating the two equilibrium
// labelings, zero numbers of profile differences, and the index recursion.
#ifndef STURM_PERMUTATION_HPP
#define STURM_PERMUTATION_HPP

#include <string>
#include <vector>

#include "sturm/equilibria.hpp"

namespace sturm {

struct SturmPermutation {
    int n = 0;
    std::vector<int> sigma;  // 1-based images; sigma[m-1] = d-label at position m along M^s
    std::vector<std::string> warnings;

    int operator()(int m) const { return sigma[m - 1]; }
    std::vector<int> inverse() const;  // 1-based
    std::string cycles() const;        // "(2 4)(3 5)" or "id"
};

// Sorts by d for labels 1..N, then reads the labels off in e-order. Requires
// hyperbolic records and pairwise gaps above merge_tol in both d and e.
SturmPermutation build_permutation(const std::vector<EquilibriumRecord>& records,
                                   double merge_tol);

struct ZeroNumberTable {
    int n = 0;
    std::vector<std::vector<int>> z;       // z[i][j] = z(u_i - u_j), diagonal -1
    std::vector<std::vector<bool>> flagged;  // unresolved near-tangency
};

// Strict sign changes of g on the grid after collapsing near-zero runs
// (|g| < zero_eps); -1 when g vanishes identically. zero_eps <= 0 selects
// the default 1e-9 * sup|g|.
int zero_number(const GridFunction& g, double zero_eps = 0.0);

// Pairwise zero numbers of profile differences. Entries with a detected
// near-tangency (some node with |g| and |g_theta| both below zero_eps) are
// recomputed on a 4x finer grid; still-tangent entries are flagged.
ZeroNumberTable zero_number_table(const std::vector<EquilibriumRecord>& records,
                                  const ProblemSpec& spec, int threads = 1);

// i_1 = 0; i_{m+1} = i_m + (-1)^{m+1} sign(sigma^{-1}(m+1) - sigma^{-1}(m)).
// Throws when the recursion leaves the admissible (nonnegative) range.
std::vector<int> morse_from_permutation(const SturmPermutation& sigma);

}  // namespace sturm

#endif
