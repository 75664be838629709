#include "hgtrack/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hgtrack/rounding.hpp"
#include "hgtrack/text.hpp"

namespace hgtrack {

Tracklet make_tracklet(std::vector<int> det_ids, int level, const FeatureStore& store) {
  if (det_ids.empty()) throw std::logic_error("make_tracklet: empty detection list");
  Tracklet t;
  t.level = level;
  t.det_ids = std::move(det_ids);
  int prev = -1;
  for (int id : t.det_ids) {
    int frame = store.detections[id].frame;
    if (frame <= prev) throw std::logic_error("make_tracklet: frames not strictly increasing");
    prev = frame;
  }
  t.first_det = t.det_ids.front();
  t.last_det = t.det_ids.back();
  t.first_frame = store.detections[t.first_det].frame;
  t.last_frame = store.detections[t.last_det].frame;

  const size_t app_dim = store.bundles[t.first_det].appearance.size();
  std::vector<double> app(app_dim, 0.0);
  std::vector<double> jersey(kJerseyDim, 0.0);
  std::array<double, kTeamDim> team{};
  int legible = 0;
  for (int id : t.det_ids) {
    const FeatureBundle& fb = store.bundles[id];
    for (size_t i = 0; i < app_dim; ++i) app[i] += fb.appearance[i];
    for (int i = 0; i < kTeamDim; ++i) team[i] += fb.team[i];
    if (fb.jersey_legible) {
      ++legible;
      for (int i = 0; i < kJerseyDim; ++i) jersey[i] += fb.jersey[i];
    }
  }
  const double n = static_cast<double>(t.det_ids.size());
  t.agg_appearance.resize(app_dim);
  for (size_t i = 0; i < app_dim; ++i) t.agg_appearance[i] = static_cast<float>(app[i] / n);
  for (int i = 0; i < kTeamDim; ++i) t.agg_team[i] = static_cast<float>(team[i] / n);
  t.jersey_legible = legible > 0;
  if (legible > 0)
    for (int i = 0; i < kJerseyDim; ++i) t.agg_jersey[i] = static_cast<float>(jersey[i] / legible);
  return t;
}

namespace {

double spatial_distance(const Tracklet& a, const Tracklet& b, const FeatureStore& store) {
  const Position& pa = store.bundles[a.last_det].position;
  const Position& pb = store.bundles[b.first_det].position;
  double dx = static_cast<double>(pb.x) - pa.x;
  double dy = static_cast<double>(pb.y) - pa.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

AssocGraph build_level_graph(std::vector<Tracklet> nodes, int level, int window_start,
                             int window_end, const FeatureStore& store, const EngineConfig& cfg) {
  AssocGraph g;
  g.level = level;
  g.window_start = window_start;
  g.window_end = window_end;
  g.nodes = std::move(nodes);
  std::sort(g.nodes.begin(), g.nodes.end(), [](const Tracklet& a, const Tracklet& b) {
    return a.first_frame != b.first_frame ? a.first_frame < b.first_frame
                                          : a.first_det < b.first_det;
  });
  for (size_t i = 0; i < g.nodes.size(); ++i) g.nodes[i].node_id = static_cast<int>(i);

  struct Candidate {
    int src, dst;
    double prune_score;
    double dist;
  };
  std::vector<Candidate> cands;
  const int n = static_cast<int>(g.nodes.size());
  const long long span = max_temporal_span(level);
  double max_dist = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Nodes sorted by first frame, so only (i, j) can be forward in time.
      if (g.nodes[i].last_frame >= g.nodes[j].first_frame) continue;
      if (g.nodes[j].first_frame - g.nodes[i].last_frame > span) continue;
      double d = spatial_distance(g.nodes[i], g.nodes[j], store);
      max_dist = std::max(max_dist, d);
      cands.push_back({i, j, 0.0, d});
    }
  }
  for (Candidate& c : cands) {
    double app = cosine(g.nodes[c.src].agg_appearance, g.nodes[c.dst].agg_appearance);
    double norm = max_dist > 0.0 ? c.dist / max_dist : 0.0;
    c.prune_score = app - cfg.prune_lambda * norm;
  }

  auto better = [&](const Candidate& a, const Candidate& b, bool by_dst) {
    if (a.prune_score != b.prune_score) return a.prune_score > b.prune_score;
    const Tracklet& ta = g.nodes[by_dst ? a.src : a.dst];
    const Tracklet& tb = g.nodes[by_dst ? b.src : b.dst];
    if (ta.first_frame != tb.first_frame) return ta.first_frame < tb.first_frame;
    return ta.node_id < tb.node_id;
  };

  // Keep the K best outgoing per source, then the K best incoming per
  // destination among the survivors.
  std::vector<std::vector<Candidate>> by_src(n);
  for (const Candidate& c : cands) by_src[c.src].push_back(c);
  std::vector<Candidate> survivors;
  for (int i = 0; i < n; ++i) {
    auto& lst = by_src[i];
    std::sort(lst.begin(), lst.end(),
              [&](const Candidate& a, const Candidate& b) { return better(a, b, false); });
    if (static_cast<int>(lst.size()) > cfg.prune_k) lst.resize(cfg.prune_k);
    survivors.insert(survivors.end(), lst.begin(), lst.end());
  }
  std::vector<std::vector<Candidate>> by_dst(n);
  for (const Candidate& c : survivors) by_dst[c.dst].push_back(c);
  std::vector<Candidate> kept;
  for (int j = 0; j < n; ++j) {
    auto& lst = by_dst[j];
    std::sort(lst.begin(), lst.end(),
              [&](const Candidate& a, const Candidate& b) { return better(a, b, true); });
    if (static_cast<int>(lst.size()) > cfg.prune_k) lst.resize(cfg.prune_k);
    kept.insert(kept.end(), lst.begin(), lst.end());
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  SimilarityContext ctx;
  ctx.mask = cfg.features;
  ctx.mode = cfg.spatial_mode;
  ctx.span = max_temporal_span(cfg.levels);
  ctx.image_diag = std::sqrt(static_cast<double>(cfg.image_width) * cfg.image_width +
                             static_cast<double>(cfg.image_height) * cfg.image_height);
  g.edges.reserve(kept.size());
  for (const Candidate& c : kept) {
    GraphEdge e;
    e.src = c.src;
    e.dst = c.dst;
    e.features = node_similarities(g.nodes[c.src], g.nodes[c.dst], store, ctx);
    g.edges.push_back(std::move(e));
  }
  return g;
}

std::vector<Tracklet> promote_tracklets(const AssocGraph& solved, const std::vector<int>& accepted,
                                        const FeatureStore& store) {
  std::vector<std::vector<int>> chains = extract_chains(solved, accepted);
  std::vector<Tracklet> out;
  out.reserve(chains.size());
  for (const auto& chain : chains) {
    std::vector<int> det_ids;
    for (int node : chain)
      det_ids.insert(det_ids.end(), solved.nodes[node].det_ids.begin(),
                     solved.nodes[node].det_ids.end());
    out.push_back(make_tracklet(std::move(det_ids), solved.level + 1, store));
  }
  std::sort(out.begin(), out.end(), [](const Tracklet& a, const Tracklet& b) {
    return a.first_frame != b.first_frame ? a.first_frame < b.first_frame
                                          : a.first_det < b.first_det;
  });
  return out;
}

namespace {

struct WindowSpan {
  int start;
  int end;
};

std::vector<WindowSpan> make_windows(int frame_count, long long window, double overlap) {
  long long stride = std::max<long long>(
      1, static_cast<long long>(std::llround(static_cast<double>(window) * (1.0 - overlap))));
  std::vector<WindowSpan> out;
  for (long long start = 0; start < frame_count; start += stride) {
    out.push_back({static_cast<int>(start),
                   static_cast<int>(std::min<long long>(start + window, frame_count))});
    if (start + window >= frame_count) break;
  }
  if (out.empty()) out.push_back({0, frame_count});
  return out;
}

void dump_graph(const AssocGraph& g, const std::string& dir, int window_idx, int tile_idx) {
  std::filesystem::create_directories(dir);
  std::ostringstream name;
  name << dir << "/window" << window_idx << "_level" << g.level << "_tile" << tile_idx << ".txt";
  std::ofstream out(name.str());
  out << "# level " << g.level << " window [" << g.window_start << ',' << g.window_end << ")\n";
  for (const GraphEdge& e : g.edges) {
    out << g.nodes[e.src].first_det << ' ' << g.nodes[e.dst].first_det << ' '
        << format_real(e.score);
    for (float f : e.features) out << ' ' << format_real(f);
    out << '\n';
  }
}

// Levels 1..L over one window; emits every built graph to visit before it is
// solved, so callers can collect or dump them.
std::vector<Tracklet> solve_window(const FeatureStore& store, const EngineConfig& cfg,
                                   WindowSpan win, const GraphSolver& solve,
                                   const std::optional<std::string>& debug_dir, int window_idx) {
  std::vector<Tracklet> current;
  for (const Detection& d : store.detections) {
    if (d.frame >= win.start && d.frame < win.end) current.push_back(make_tracklet({d.det_id}, 1, store));
  }
  std::sort(current.begin(), current.end(), [](const Tracklet& a, const Tracklet& b) {
    return a.first_frame != b.first_frame ? a.first_frame < b.first_frame
                                          : a.first_det < b.first_det;
  });
  size_t total_dets = current.size();

  for (int level = 1; level <= cfg.levels; ++level) {
    long long tile = max_temporal_span(level);
    std::map<long long, std::vector<Tracklet>> tiles;
    for (Tracklet& t : current) tiles[(t.first_frame - win.start) / tile].push_back(std::move(t));
    std::vector<Tracklet> next;
    for (auto& [tile_idx, nodes] : tiles) {
      int tile_start = win.start + static_cast<int>(tile_idx * tile);
      AssocGraph g = build_level_graph(std::move(nodes), level, tile_start,
                                       tile_start + static_cast<int>(tile), store, cfg);
      std::vector<int> accepted = solve(g);
      if (debug_dir) dump_graph(g, *debug_dir, window_idx, static_cast<int>(tile_idx));
      std::vector<Tracklet> promoted = promote_tracklets(g, accepted, store);
      next.insert(next.end(), std::make_move_iterator(promoted.begin()),
                  std::make_move_iterator(promoted.end()));
    }
    current = std::move(next);
    size_t count = 0;
    for (const Tracklet& t : current) count += t.det_ids.size();
    if (count != total_dets)
      throw std::logic_error("hierarchy: detections lost during promotion at level " +
                             std::to_string(level));
  }
  std::sort(current.begin(), current.end(), [](const Tracklet& a, const Tracklet& b) {
    return a.first_frame != b.first_frame ? a.first_frame < b.first_frame
                                          : a.first_det < b.first_det;
  });
  return current;
}

TrackSet tracklets_to_trackset(const std::vector<Tracklet>& tracklets, const FeatureStore& store,
                               const SequenceMeta& meta) {
  TrackSet ts;
  ts.meta = meta;
  int next_id = 0;
  for (const Tracklet& t : tracklets) {
    Track tr;
    tr.track_id = next_id++;
    for (int id : t.det_ids) {
      const Detection& d = store.detections[id];
      tr.entries.push_back({d.frame, d.bbox, d.confidence, d.det_id});
    }
    ts.tracks.push_back(std::move(tr));
  }
  return ts;
}

}  // namespace

TrackSet run_hierarchy_with(const FeatureStore& store, const EngineConfig& cfg,
                            const SequenceMeta& meta, const GraphSolver& solve,
                            const HierarchyOptions& opts) {
  long long window = max_temporal_span(cfg.levels);
  std::vector<WindowSpan> spans = make_windows(meta.frame_count, window, cfg.window_overlap);
  std::vector<TrackSet> partial(spans.size());

  auto work = [&](size_t i) {
    std::vector<Tracklet> top =
        solve_window(store, cfg, spans[i], solve, opts.debug_dir, static_cast<int>(i));
    partial[i] = tracklets_to_trackset(top, store, meta);
  };
  if (opts.threads > 1 && spans.size() > 1) {
    std::vector<std::future<void>> futs;
    size_t next = 0;
    while (next < spans.size()) {
      futs.clear();
      for (int t = 0; t < opts.threads && next < spans.size(); ++t, ++next)
        futs.push_back(std::async(std::launch::async, work, next));
      for (auto& f : futs) f.get();
    }
  } else {
    for (size_t i = 0; i < spans.size(); ++i) work(i);
  }
  return stitch_windows(partial, meta);
}

TrackSet run_hierarchy(const FeatureStore& store, const ScorerWeights& weights,
                       const EngineConfig& cfg, const SequenceMeta& meta,
                       const HierarchyOptions& opts) {
  std::string expected = feature_layout_tag(cfg.features, cfg.spatial_mode);
  if (weights.feature_layout != expected)
    throw std::invalid_argument("scorer weights use feature layout '" + weights.feature_layout +
                                "' but the engine is configured for '" + expected + "'");
  GraphSolver solve = [&](AssocGraph& g) {
    score_graph(g, weights);
    return cfg.rounding == RoundingKind::Greedy
               ? greedy_round(g, cfg.edge_threshold)
               : exact_round(g, cfg.edge_threshold, cfg.exact_cap);
  };
  return run_hierarchy_with(store, cfg, meta, solve, opts);
}

TrackSet stitch_windows(const std::vector<TrackSet>& windows, const SequenceMeta& meta) {
  struct Merged {
    std::map<int, TrackEntry> by_frame;  // earlier windows win frame conflicts
    std::set<int> det_ids;
  };
  std::vector<Merged> merged;
  std::map<int, int> det_owner;  // det_id -> merged track index

  for (const TrackSet& ts : windows) {
    struct Link {
      size_t count;
      int existing;
      int incoming;
    };
    std::vector<Link> links;
    for (size_t inc = 0; inc < ts.tracks.size(); ++inc) {
      std::map<int, size_t> shared;  // existing index -> shared det count
      for (const TrackEntry& e : ts.tracks[inc].entries) {
        auto it = det_owner.find(e.det_id);
        if (it != det_owner.end()) ++shared[it->second];
      }
      for (auto& [existing, count] : shared)
        links.push_back({count, existing, static_cast<int>(inc)});
    }
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
      if (a.count != b.count) return a.count > b.count;
      if (a.existing != b.existing) return a.existing < b.existing;
      return a.incoming < b.incoming;
    });
    std::vector<char> existing_used(merged.size(), 0);
    std::vector<int> assignment(ts.tracks.size(), -1);
    for (const Link& l : links) {
      if (existing_used[l.existing] || assignment[l.incoming] != -1) continue;
      existing_used[l.existing] = 1;
      assignment[l.incoming] = l.existing;
    }
    for (size_t inc = 0; inc < ts.tracks.size(); ++inc) {
      int target = assignment[inc];
      if (target == -1) {
        target = static_cast<int>(merged.size());
        merged.emplace_back();
      }
      Merged& m = merged[target];
      for (const TrackEntry& e : ts.tracks[inc].entries) {
        if (m.det_ids.count(e.det_id)) continue;
        // A detection may only live in one final track.
        auto owner = det_owner.find(e.det_id);
        if (owner != det_owner.end() && owner->second != target) continue;
        if (m.by_frame.count(e.frame)) continue;
        m.by_frame[e.frame] = e;
        m.det_ids.insert(e.det_id);
        det_owner[e.det_id] = target;
      }
    }
  }

  std::vector<size_t> order(merged.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (merged[a].by_frame.empty() || merged[b].by_frame.empty())
      return merged[b].by_frame.empty() && !merged[a].by_frame.empty();
    int fa = merged[a].by_frame.begin()->first;
    int fb = merged[b].by_frame.begin()->first;
    return fa != fb ? fa < fb : a < b;
  });

  TrackSet out;
  out.meta = meta;
  int next_id = 0;
  for (size_t idx : order) {
    if (merged[idx].by_frame.empty()) continue;
    Track tr;
    tr.track_id = next_id++;
    for (auto& [frame, entry] : merged[idx].by_frame) tr.entries.push_back(entry);
    out.tracks.push_back(std::move(tr));
  }
  return out;
}

std::vector<int> detection_identities(const TrackSet& gt, size_t det_count) {
  std::vector<int> identity(det_count, -1);
  for (const Track& tr : gt.tracks)
    for (const TrackEntry& e : tr.entries)
      if (e.det_id >= 0 && e.det_id < static_cast<int>(det_count)) identity[e.det_id] = tr.track_id;
  return identity;
}

std::vector<LabeledGraph> build_training_graphs(const FeatureStore& store, const TrackSet& gt,
                                                const EngineConfig& cfg, const SequenceMeta& meta) {
  std::vector<int> identity = detection_identities(gt, store.detections.size());
  std::vector<LabeledGraph> out;

  GraphSolver teacher = [&](AssocGraph& g) {
    // Positive edges join temporally consecutive nodes of one identity.
    std::map<int, std::vector<int>> by_identity;  // identity -> node ids by first frame
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      int id = identity[g.nodes[i].first_det];
      if (id >= 0) by_identity[id].push_back(static_cast<int>(i));
    }
    std::set<std::pair<int, int>> positives;
    for (auto& [id, nodes] : by_identity) {
      std::vector<int> sorted = nodes;
      std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        return g.nodes[a].first_frame < g.nodes[b].first_frame;
      });
      for (size_t i = 0; i + 1 < sorted.size(); ++i)
        positives.insert({sorted[i], sorted[i + 1]});
    }
    LabeledGraph lg;
    lg.labels.resize(g.edges.size(), 0);
    std::vector<int> accepted;
    for (size_t i = 0; i < g.edges.size(); ++i) {
      if (positives.count({g.edges[i].src, g.edges[i].dst})) {
        lg.labels[i] = 1;
        accepted.push_back(static_cast<int>(i));
      }
    }
    lg.graph = g;
    out.push_back(std::move(lg));
    return accepted;
  };
  run_hierarchy_with(store, cfg, meta, teacher);
  return out;
}

}  // namespace hgtrack
