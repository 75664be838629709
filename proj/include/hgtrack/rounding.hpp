// Converts edge scores into a binary accepted-edge set under flow
// constraints: at most one accepted outgoing and one accepted incoming edge
// per node, so accepted edges form vertex-disjoint forward paths.
#pragma once

#include <vector>

#include "hgtrack/model.hpp"

namespace hgtrack {

/// Greedy rounding: edges sorted by score descending (ties: smaller src
/// first frame, then smaller src id, then smaller dst id); an edge is
/// accepted iff score >= threshold and both endpoint slots are free.
/// Returns accepted edge indices in the order they were accepted.
std::vector<int> greedy_round(const AssocGraph& g, double threshold);

/// Exact rounding: maximizes the surplus objective sum(score - threshold)
/// over feasible edge sets, solved as maximum-weight bipartite matching
/// between out-slots and in-slots. Throws std::invalid_argument when the
/// graph exceeds node_cap.
std::vector<int> exact_round(const AssocGraph& g, double threshold, int node_cap = 200);

/// Objective both solvers compete on.
double rounding_objective(const AssocGraph& g, const std::vector<int>& accepted, double threshold);

/// Follow accepted edges into maximal chains; every node lands in exactly
/// one chain. Throws std::logic_error when the accepted set violates flow
/// constraints.
std::vector<std::vector<int>> extract_chains(const AssocGraph& g, const std::vector<int>& accepted);

}  // namespace hgtrack
