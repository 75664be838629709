// Test-only oracles, independent of the library implementations they check:
// exhaustive matching for the tracking metrics, subset enumeration for the
// rounding solvers, all-partitions 2-means, and seeded random instance
// generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "hgtrack/model.hpp"
#include "hgtrack/rng.hpp"

namespace oracle {

using hgtrack::AssocGraph;
using hgtrack::BBox;
using hgtrack::GraphEdge;
using hgtrack::Rng;
using hgtrack::Track;
using hgtrack::TrackEntry;
using hgtrack::Tracklet;
using hgtrack::TrackSet;

// ---------------------------------------------------------------------------
// Rounding: brute force over every edge subset.

struct RoundOracle {
  double best_objective = 0.0;
  std::vector<std::vector<int>> optimal_sets;  // all subsets achieving the max
};

inline bool feasible(const AssocGraph& g, const std::vector<int>& subset) {
  std::set<int> out_used, in_used;
  for (int idx : subset) {
    if (!out_used.insert(g.edges[idx].src).second) return false;
    if (!in_used.insert(g.edges[idx].dst).second) return false;
  }
  return true;
}

inline RoundOracle brute_force_round(const AssocGraph& g, double threshold) {
  const int m = static_cast<int>(g.edges.size());
  RoundOracle res;
  res.best_objective = 0.0;
  res.optimal_sets.push_back({});
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> subset;
    double obj = 0.0;
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i)) {
        subset.push_back(i);
        obj += g.edges[i].score - threshold;
      }
    }
    if (!feasible(g, subset)) continue;
    if (obj > res.best_objective + 1e-12) {
      res.best_objective = obj;
      res.optimal_sets.clear();
      res.optimal_sets.push_back(subset);
    } else if (std::abs(obj - res.best_objective) <= 1e-12) {
      res.optimal_sets.push_back(subset);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Metrics: exhaustive per-frame matching with the same mathematical
// definition as the evaluator but none of its code.

inline double oracle_iou(const BBox& a, const BBox& b) {
  double x1 = std::max(a.x, b.x), y1 = std::max(a.y, b.y);
  double x2 = std::min(static_cast<double>(a.x) + a.w, static_cast<double>(b.x) + b.w);
  double y2 = std::min(static_cast<double>(a.y) + a.h, static_cast<double>(b.y) + b.h);
  double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
  if (inter <= 0.0) return 0.0;
  double ua = static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
  return inter / ua;
}

struct OracleScores {
  double hota = 0, deta = 0, assa = 0;  // percentages
  std::vector<double> hota_per_alpha;   // fractions
};

inline OracleScores oracle_evaluate(const TrackSet& pred, const TrackSet& gt) {
  struct Det {
    int id;
    BBox box;
  };
  int frames = 0;
  for (const Track& t : gt.tracks)
    for (const TrackEntry& e : t.entries) frames = std::max(frames, e.frame + 1);
  for (const Track& t : pred.tracks)
    for (const TrackEntry& e : t.entries) frames = std::max(frames, e.frame + 1);

  std::vector<std::vector<Det>> G(frames), P(frames);
  std::map<int, long long> gcount, pcount;
  for (size_t t = 0; t < gt.tracks.size(); ++t)
    for (const TrackEntry& e : gt.tracks[t].entries) {
      G[e.frame].push_back({static_cast<int>(t), e.bbox});
      ++gcount[static_cast<int>(t)];
    }
  for (size_t t = 0; t < pred.tracks.size(); ++t)
    for (const TrackEntry& e : pred.tracks[t].entries) {
      P[e.frame].push_back({static_cast<int>(t), e.bbox});
      ++pcount[static_cast<int>(t)];
    }
  long long total_gt = 0, total_pred = 0;
  for (auto& [k, v] : gcount) total_gt += v;
  for (auto& [k, v] : pcount) total_pred += v;

  // Global alignment from un-matched potential, straight from the formulas.
  std::map<std::pair<int, int>, double> potential;
  for (int f = 0; f < frames; ++f) {
    for (size_t gi = 0; gi < G[f].size(); ++gi) {
      for (size_t pi = 0; pi < P[f].size(); ++pi) {
        double v = oracle_iou(G[f][gi].box, P[f][pi].box);
        if (v <= 0.0) continue;
        double row = 0, col = 0;
        for (size_t pj = 0; pj < P[f].size(); ++pj) row += oracle_iou(G[f][gi].box, P[f][pj].box);
        for (size_t gj = 0; gj < G[f].size(); ++gj) col += oracle_iou(G[f][gj].box, P[f][pi].box);
        double denom = row + col - v;
        if (denom > 1e-12) potential[{G[f][gi].id, P[f][pi].id}] += v / denom;
      }
    }
  }
  auto alignment = [&](int g, int p) {
    auto it = potential.find({g, p});
    if (it == potential.end()) return 0.0;
    double denom = static_cast<double>(gcount[g]) + pcount[p] - it->second;
    return denom > 1e-12 ? it->second / denom : 0.0;
  };

  OracleScores out;
  double sum_h = 0, sum_d = 0, sum_a = 0;
  int alphas = 0;
  for (int k = 1; k <= 19; ++k) {
    double alpha = k * 0.05;
    long long tp = 0;
    std::map<std::pair<int, int>, long long> matches;
    for (int f = 0; f < frames; ++f) {
      // Exhaustive search over injective mappings gt -> pred among pairs
      // with IoU >= alpha; maximize total alignment*iou weight, ties to the
      // lexicographically smallest pair list.
      const auto& gd = G[f];
      const auto& pd = P[f];
      std::vector<int> cur(gd.size(), -1), best(gd.size(), -1);
      double best_w = -1.0;
      std::vector<char> used(pd.size(), 0);
      auto rec = [&](auto&& self, size_t gi, double w) -> void {
        if (gi == gd.size()) {
          if (w > best_w + 1e-15) {
            best_w = w;
            best = cur;
          } else if (std::abs(w - best_w) <= 1e-15 && cur < best) {
            best = cur;
          }
          return;
        }
        cur[gi] = -1;
        self(self, gi + 1, w);
        for (size_t pi = 0; pi < pd.size(); ++pi) {
          if (used[pi]) continue;
          double v = oracle_iou(gd[gi].box, pd[pi].box);
          if (v < alpha) continue;
          used[pi] = 1;
          cur[gi] = static_cast<int>(pi);
          self(self, gi + 1, w + alignment(gd[gi].id, pd[pi].id) * v);
          used[pi] = 0;
          cur[gi] = -1;
        }
      };
      rec(rec, 0, 0.0);
      for (size_t gi = 0; gi < gd.size(); ++gi) {
        if (best[gi] < 0) continue;
        ++tp;
        ++matches[{gd[gi].id, pd[best[gi]].id}];
      }
    }
    long long fn = total_gt - tp, fp = total_pred - tp;
    double ass_sum = 0;
    for (auto& [pair, mc] : matches) {
      double denom = static_cast<double>(gcount[pair.first]) + pcount[pair.second] - mc;
      ass_sum += static_cast<double>(mc) * (static_cast<double>(mc) / denom);
    }
    double deta = (tp + fn + fp) > 0 ? static_cast<double>(tp) / (tp + fn + fp) : 0.0;
    double assa = tp > 0 ? ass_sum / tp : 0.0;
    double hota = std::sqrt(deta * assa);
    out.hota_per_alpha.push_back(hota);
    sum_h += hota;
    sum_d += deta;
    sum_a += assa;
    ++alphas;
  }
  out.hota = 100.0 * sum_h / alphas;
  out.deta = 100.0 * sum_d / alphas;
  out.assa = 100.0 * sum_a / alphas;
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive 2-means over every 2-partition (n <= 20).

struct TwoMeans {
  std::vector<double> centroid_a, centroid_b;
  double cost = 0;
};

inline TwoMeans exhaustive_two_means(const std::vector<std::vector<float>>& pts) {
  const int n = static_cast<int>(pts.size());
  const size_t dim = pts[0].size();
  TwoMeans best;
  best.cost = 1e300;
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<double> ca(dim, 0), cb(dim, 0);
    int na = 0, nb = 0;
    for (int i = 0; i < n; ++i) {
      auto& c = (mask & (1 << i)) ? ca : cb;
      for (size_t k = 0; k < dim; ++k) c[k] += pts[i][k];
      ((mask & (1 << i)) ? na : nb)++;
    }
    for (size_t k = 0; k < dim; ++k) {
      ca[k] /= na;
      cb[k] /= nb;
    }
    double cost = 0;
    for (int i = 0; i < n; ++i) {
      const auto& c = (mask & (1 << i)) ? ca : cb;
      for (size_t k = 0; k < dim; ++k) {
        double d = pts[i][k] - c[k];
        cost += d * d;
      }
    }
    if (cost < best.cost) {
      best.cost = cost;
      best.centroid_a = ca;
      best.centroid_b = cb;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random instances.

inline TrackSet random_trackset(Rng& rng, int max_frames, int max_ids) {
  TrackSet ts;
  int ids = 1 + rng.uniform_int(max_ids);
  int frames = 1 + rng.uniform_int(max_frames);
  for (int id = 0; id < ids; ++id) {
    Track tr;
    tr.track_id = id;
    for (int f = 0; f < frames; ++f) {
      if (rng.uniform() < 0.3) continue;  // holes
      BBox b;
      b.x = static_cast<float>(rng.uniform(0.0, 60.0));
      b.y = static_cast<float>(rng.uniform(0.0, 60.0));
      b.w = static_cast<float>(rng.uniform(5.0, 30.0));
      b.h = static_cast<float>(rng.uniform(5.0, 30.0));
      tr.entries.push_back({f, b, 1.f, -1});
    }
    if (!tr.entries.empty()) ts.tracks.push_back(tr);
  }
  ts.meta.frame_count = frames;
  return ts;
}

// A random scored DAG; node frames increase with index.
inline AssocGraph random_graph(Rng& rng, int max_nodes, int max_edges) {
  AssocGraph g;
  g.level = 1;
  int n = 2 + rng.uniform_int(max_nodes - 1);
  for (int i = 0; i < n; ++i) {
    Tracklet t;
    t.node_id = i;
    t.det_ids = {i};
    t.first_det = t.last_det = i;
    t.first_frame = t.last_frame = i;
    g.nodes.push_back(t);
  }
  int m = rng.uniform_int(max_edges + 1);
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < m; ++e) {
    int a = rng.uniform_int(n - 1);
    int b = a + 1 + rng.uniform_int(n - 1 - a);
    if (!seen.insert({a, b}).second) continue;
    GraphEdge edge;
    edge.src = a;
    edge.dst = b;
    edge.score = rng.uniform();
    g.edges.push_back(edge);
  }
  return g;
}

}  // namespace oracle
