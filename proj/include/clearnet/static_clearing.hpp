#pragma once

#include "clearnet/network.hpp"

#include <set>
#include <utility>

namespace clearnet {

/// Single-date clearing problem: external assets plus the liability matrix.
struct StaticProblem {
    Vec external_assets;  // x, nonnegative, index 0 = society
    Mat liabilities;      // L

    void validate() const;
    Vec total_obligations() const { return liabilities.rowwise().sum(); }
};

/// Result of the fictitious default algorithm on a StaticProblem.
struct StaticSolution {
    Vec wealth;                          // V, fixed point of the wealth equation
    Vec payments;                        // p = (pbar - V^-)^+
    std::vector<std::set<int>> orders;   // insolvent set after each round, nested
    std::set<int> first_order_solvent;   // {0} plus banks with x_i - pbar_i > 0
    std::vector<std::string> warnings;

    /// Round in which a node first turned insolvent; 0 when it never did.
    int default_order(int node) const;
    std::set<int> default_set() const;
};

/// Solves the clearing wealth fixed point V = x + Pi^T (pbar - V^-)^+ - pbar
/// by growing the insolvent set and re-solving a linear system each round.
/// Terminates after at most n rounds. Warns (without failing) when some bank
/// owes nothing to society, in which case uniqueness is not guaranteed and
/// the linear solve may legitimately fail.
StaticSolution clear_static(const StaticProblem& prob);

/// Iterates the monotone payment map p -> pbar ^ (x + Pi^T p) from both ends
/// of the payment lattice until successive iterates differ by less than
/// `tol` per component. Returns the greatest and least clearing wealths.
/// Both coincide whenever every bank owes to society.
std::pair<Vec, Vec> picard_oracle(const StaticProblem& prob, double tol = 1e-10,
                                  int max_iters = 1000000);

/// Default orders from the fictitious default rounds plus the set of nodes
/// solvent even under maximum negative exposure. Banks exactly at
/// x_i - pbar_i = 0 are excluded from the solvent set.
std::pair<std::vector<std::set<int>>, std::set<int>> classify_orders(const StaticProblem& prob);

}  // namespace clearnet
