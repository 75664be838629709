#include "hgtrack/assignment.hpp"

#include <algorithm>
#include <limits>

namespace hgtrack {

// Potential-based Kuhn-Munkres on a square min-cost matrix; padding with
// zero-cost cells makes every partial matching reachable, so maximizing
// weight reduces to minimizing negated weight.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const int rows = static_cast<int>(weight.size());
  int cols = 0;
  for (const auto& r : weight) cols = std::max(cols, static_cast<int>(r.size()));
  const int n = std::max(rows, cols);
  if (n == 0) return {};

  auto cost = [&](int r, int c) -> double {
    if (r < rows && c < static_cast<int>(weight[r].size())) {
      double w = weight[r][c];
      return w > 0.0 ? -w : 0.0;
    }
    return 0.0;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= n; ++j) {
    int i = p[j];
    if (i >= 1 && i <= rows && j <= cols) {
      // Keep only pairs that carry real (positive) weight.
      if (j - 1 < static_cast<int>(weight[i - 1].size()) && weight[i - 1][j - 1] > 0.0)
        row_to_col[i - 1] = j - 1;
    }
  }
  return row_to_col;
}

}  // namespace hgtrack
