// Maximum-weight bipartite assignment (Kuhn-Munkres, O(n^3)). Rows and
// columns may be left unmatched at zero gain; missing pairs behave as weight
// zero. Shared by the exact rounding solver and the metric matcher.
#pragma once

#include <vector>

namespace hgtrack {

/// weight[r][c] >= 0 for real candidate pairs; any non-positive weight is
/// treated as "no pair". Returns, per row, the matched column or -1. The
/// returned matching maximizes the total weight over all partial matchings.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

}  // namespace hgtrack
