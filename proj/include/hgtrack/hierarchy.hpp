// The graph hierarchy: level-1 graphs over single detections, level-l graphs
// over tracklets from level l-1. Level l tiles a window into spans of 2^(l+1)
// frames, so each level doubles the temporal reach until the top level covers
// the whole sliding window; windows overlap and are stitched by shared
// detections.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgtrack/features.hpp"
#include "hgtrack/ingest.hpp"
#include "hgtrack/model.hpp"
#include "hgtrack/scorer.hpp"

namespace hgtrack {

/// Build a tracklet from temporally ordered detections, aggregating
/// appearance/team over all members and jersey over legible members only.
/// Throws std::logic_error when member frames are not strictly increasing.
Tracklet make_tracklet(std::vector<int> det_ids, int level, const FeatureStore& store);

/// Candidate graph over nodes (sorted by first frame) within one tile:
/// forward edges only, at most K outgoing and K incoming per node, ranked by
/// appearance-minus-spatial pruning score. Edge features are filled, scores
/// are left at 0.
AssocGraph build_level_graph(std::vector<Tracklet> nodes, int level, int window_start,
                             int window_end, const FeatureStore& store, const EngineConfig& cfg);

/// Merge accepted chains into level+1 tracklets; singletons promote
/// unchanged. Throws std::logic_error when the accepted set violates flow
/// constraints.
std::vector<Tracklet> promote_tracklets(const AssocGraph& solved, const std::vector<int>& accepted,
                                        const FeatureStore& store);

/// Per-graph solver: returns accepted edge indices. The default solver
/// scores with weights and rounds per config.
using GraphSolver = std::function<std::vector<int>(AssocGraph&)>;

struct HierarchyOptions {
  std::optional<std::string> debug_dir;  // per-level edge list dumps
  int threads = 1;                       // windows processed in parallel
};

/// Full pipeline: sliding windows of max_temporal_span(L) frames, levels
/// 1..L per window, then cross-window stitching. Track ids are dense in
/// first-frame order.
TrackSet run_hierarchy(const FeatureStore& store, const ScorerWeights& weights,
                       const EngineConfig& cfg, const SequenceMeta& meta,
                       const HierarchyOptions& opts = {});

/// Same pipeline with a caller-supplied solver (used for teacher forcing).
TrackSet run_hierarchy_with(const FeatureStore& store, const EngineConfig& cfg,
                            const SequenceMeta& meta, const GraphSolver& solve,
                            const HierarchyOptions& opts = {});

/// Merge per-window track sets: tracks from adjacent windows sharing
/// detections in the overlap are merged, conflicts resolved by larger shared
/// count (ties to the earlier track).
TrackSet stitch_windows(const std::vector<TrackSet>& windows, const SequenceMeta& meta);

/// det_id -> track identity (or -1) from an identified track set.
std::vector<int> detection_identities(const TrackSet& gt, size_t det_count);

/// Teacher-forced graphs for training: at every level the solver accepts
/// exactly the ground-truth edges (same identity, temporally consecutive in
/// the graph), and each built graph is emitted with its labels.
std::vector<LabeledGraph> build_training_graphs(const FeatureStore& store, const TrackSet& gt,
                                                const EngineConfig& cfg, const SequenceMeta& meta);

}  // namespace hgtrack
