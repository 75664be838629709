#include "hgtrack/rounding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "hgtrack/assignment.hpp"

namespace hgtrack {

std::vector<int> greedy_round(const AssocGraph& g, double threshold) {
  std::vector<int> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int ia, int ib) {
    const GraphEdge& a = g.edges[ia];
    const GraphEdge& b = g.edges[ib];
    if (a.score != b.score) return a.score > b.score;
    int fa = g.nodes[a.src].first_frame;
    int fb = g.nodes[b.src].first_frame;
    if (fa != fb) return fa < fb;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });
  std::vector<char> out_used(g.nodes.size(), 0), in_used(g.nodes.size(), 0);
  std::vector<int> accepted;
  for (int idx : order) {
    const GraphEdge& e = g.edges[idx];
    if (e.score < threshold) break;  // sorted, nothing later qualifies
    if (out_used[e.src] || in_used[e.dst]) continue;
    out_used[e.src] = 1;
    in_used[e.dst] = 1;
    accepted.push_back(idx);
  }
  return accepted;
}

std::vector<int> exact_round(const AssocGraph& g, double threshold, int node_cap) {
  const int n = static_cast<int>(g.nodes.size());
  if (n > node_cap)
    throw std::invalid_argument("exact_round: graph has " + std::to_string(n) +
                                " nodes, cap is " + std::to_string(node_cap));
  // Row r = node r as a source slot, column c = node c as a destination slot.
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<int>> edge_at(n, std::vector<int>(n, -1));
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const GraphEdge& e = g.edges[i];
    double surplus = e.score - threshold;
    if (surplus <= 0.0) continue;
    if (surplus > weight[e.src][e.dst]) {
      weight[e.src][e.dst] = surplus;
      edge_at[e.src][e.dst] = static_cast<int>(i);
    }
  }
  std::vector<int> match = max_weight_assignment(weight);
  std::vector<int> accepted;
  for (int r = 0; r < n; ++r) {
    if (match[r] >= 0 && edge_at[r][match[r]] >= 0) accepted.push_back(edge_at[r][match[r]]);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

double rounding_objective(const AssocGraph& g, const std::vector<int>& accepted, double threshold) {
  double total = 0;
  for (int idx : accepted) total += g.edges[idx].score - threshold;
  return total;
}

std::vector<std::vector<int>> extract_chains(const AssocGraph& g, const std::vector<int>& accepted) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> next(n, -1), prev(n, -1);
  for (int idx : accepted) {
    const GraphEdge& e = g.edges[idx];
    if (next[e.src] != -1 || prev[e.dst] != -1)
      throw std::logic_error("extract_chains: accepted edges violate flow constraints");
    next[e.src] = e.dst;
    prev[e.dst] = e.src;
  }
  std::vector<std::vector<int>> chains;
  std::vector<char> visited(n, 0);
  for (int v = 0; v < n; ++v) {
    if (prev[v] != -1) continue;  // not a chain head
    std::vector<int> chain;
    for (int cur = v; cur != -1; cur = next[cur]) {
      if (visited[cur]) throw std::logic_error("extract_chains: cycle in accepted edges");
      visited[cur] = 1;
      chain.push_back(cur);
    }
    chains.push_back(std::move(chain));
  }
  for (int v = 0; v < n; ++v)
    if (!visited[v]) throw std::logic_error("extract_chains: cycle in accepted edges");
  return chains;
}

}  // namespace hgtrack
