// Core domain types for the hierarchical graph tracker: detections, feature
// bundles, tracklets, association graphs, track sets, and the engine config.
// Everything here is immutable after construction and safe to share across
// threads.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hgtrack {

inline constexpr int kJerseyDim = 100;  // jersey numbers 0..99
inline constexpr int kCharDim = 11;     // EOL + digits 0..9
inline constexpr int kTeamDim = 3;      // team A, team B, referee

struct BBox {
  float x = 0.f;  // top-left, pixels
  float y = 0.f;
  float w = 0.f;
  float h = 0.f;

  double cx() const { return static_cast<double>(x) + static_cast<double>(w) / 2.0; }
  double cy() const { return static_cast<double>(y) + static_cast<double>(h) / 2.0; }
  double area() const { return static_cast<double>(w) * static_cast<double>(h); }

  bool operator==(const BBox&) const = default;
};

/// One bounding box in one frame. det_id is unique within a sequence and is
/// assigned by input row order.
struct Detection {
  int frame = 0;  // 0-based internally
  BBox bbox;
  float confidence = 0.f;
  int det_id = -1;
};

enum class SpatialMode { Field, Frame };

/// Spatial location of a detection under the active spatial mode.
/// Field mode: (x, y) in meters on the playing surface, w/h unused.
/// Frame mode: (x, y) is the bbox middle point in pixels, w/h the box extent.
struct Position {
  SpatialMode mode = SpatialMode::Frame;
  float x = 0.f;
  float y = 0.f;
  float w = 0.f;
  float h = 0.f;
};

/// Per-character confidences from the upstream scene-text recognizer.
/// Index 0 is EOL, indices 1..10 are digits 0..9.
struct CharConfidences {
  std::array<float, kCharDim> c1{};
  std::array<float, kCharDim> c2{};
};

/// Precomputed per-detection features, assembled by the features module.
struct FeatureBundle {
  std::vector<float> appearance;            // dimension fixed per sequence
  std::array<float, kJerseyDim> jersey{};   // all zero when not legible
  bool jersey_legible = false;
  std::array<float, kTeamDim> team{};       // exactly one entry set to 1
  Position position;
};

/// An ordered, temporally disjoint chain of detections; the node unit of an
/// association graph. A level-1 tracklet wraps a single detection.
struct Tracklet {
  int node_id = -1;            // index within its graph
  std::vector<int> det_ids;    // member frames strictly increasing
  int level = 1;
  std::vector<float> agg_appearance;         // mean over members
  std::array<float, kJerseyDim> agg_jersey{};  // mean over legible members
  bool jersey_legible = false;                 // any member legible
  std::array<float, kTeamDim> agg_team{};      // mean over members
  int first_det = -1;
  int last_det = -1;
  int first_frame = -1;
  int last_frame = -1;
};

struct GraphEdge {
  int src = -1;  // node index
  int dst = -1;
  std::vector<float> features;
  double score = 0.0;  // in [0,1] once scored
};

/// Candidate association graph at one hierarchy level over one frame window.
/// Every edge points forward in time: src.last_frame < dst.first_frame.
struct AssocGraph {
  int level = 1;
  int window_start = 0;  // [window_start, window_end)
  int window_end = 0;
  std::vector<Tracklet> nodes;
  std::vector<GraphEdge> edges;
};

struct SequenceMeta {
  int frame_count = 0;
  double fps = 25.0;
  int width = 1920;
  int height = 1080;
};

struct TrackEntry {
  int frame = 0;
  BBox bbox;
  float confidence = 1.f;
  int det_id = -1;  // -1 when unknown (e.g. parsed ground truth)
};

struct Track {
  int track_id = 0;
  std::vector<TrackEntry> entries;  // frames strictly increasing
};

/// Final trajectories; the unit of serialization and evaluation.
struct TrackSet {
  std::vector<Track> tracks;
  SequenceMeta meta;
};

enum class ScorerKind { Logistic, MessagePassing };
enum class RoundingKind { Greedy, Exact };

/// Which channels node_similarities emits, in canonical order:
/// appearance cos, jersey cos, jersey validity, team cos, spatial, iou, dt.
struct FeatureMask {
  bool appearance = true;
  bool jersey = true;
  bool team = true;
  bool spatial = true;
  bool iou = false;  // optional level-1 style channel, off by default
  bool time = true;

  bool operator==(const FeatureMask&) const = default;
};

/// Edge feature dimension under a mask and spatial mode. Frame-mode spatial
/// contributes two channels (normalized center distance, log size ratio).
int edge_feature_dim(const FeatureMask& mask, SpatialMode mode);

/// Compact layout tag stored in weight files, e.g. "app,jersey,team,field,dt".
std::string feature_layout_tag(const FeatureMask& mask, SpatialMode mode);
/// Inverse of feature_layout_tag. Throws std::invalid_argument on unknown tags.
void parse_feature_layout_tag(const std::string& tag, FeatureMask& mask, SpatialMode& mode);

struct EngineConfig {
  int levels = 7;               // L >= 1
  int prune_k = 10;             // K
  SpatialMode spatial_mode = SpatialMode::Field;
  int team_cluster_n = 500;     // N, first-N player embeddings clustered
  ScorerKind scorer = ScorerKind::Logistic;
  RoundingKind rounding = RoundingKind::Greedy;
  double window_overlap = 0.5;  // fraction of window length
  std::uint64_t seed = 0;

  double edge_threshold = 0.5;  // rounding eligibility
  double prune_lambda = 0.5;    // spatial weight in the pruning score
  int exact_cap = 200;          // node cap for the exact solver
  int mpn_rounds = 8;
  int hidden_dim = 16;

  double learning_rate = 1e-3;
  int level_iters = 500;        // per-level warmup iterations
  int joint_epochs = 250;

  FeatureMask features;
  int image_width = 1920;
  int image_height = 1080;
};

/// Largest frame gap bridgeable within one window of an L-level hierarchy;
/// level l covers windows of 2^(l+1) frames.
long long max_temporal_span(int levels);

/// Human-readable invariant violations; empty iff the TrackSet is valid.
std::vector<std::string> validate_trackset(const TrackSet& ts);

/// Structural equality for round-trip tests: same tracks, frames, boxes and
/// confidences. det_id is excluded (it is not representable in MOT files).
bool same_structure(const TrackSet& a, const TrackSet& b);

}  // namespace hgtrack
