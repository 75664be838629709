// Turns raw per-detection inputs into feature bundles and computes the node
// similarities used as edge features: jersey confidence vectors from
// per-character confidences, team one-hots via 2-means clustering, field
// coordinates via (interpolated) homographies.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hgtrack/ingest.hpp"
#include "hgtrack/model.hpp"

namespace hgtrack {

/// Cosine similarity with 64-bit accumulation; 0 when either vector has zero
/// norm.
double cosine(const float* a, const float* b, size_t n);
double cosine(const std::vector<float>& a, const std::vector<float>& b);

/// Build the 100-entry jersey number confidence vector from per-character
/// confidences. An EOL prediction in the first position marks the detection
/// illegible and yields the all-zero vector.
std::pair<std::array<float, kJerseyDim>, bool> jersey_vector(const CharConfidences& cc);

struct TeamModel {
  std::vector<float> centroid_a;
  std::vector<float> centroid_b;
  bool fitted = false;
};

/// 2-means over player embeddings with deterministic seeded initialization:
/// the first centroid is the embedding at index seed % n, the second the
/// farthest embedding from it, then Lloyd iterations (at most 100 or until
/// centroid movement < 1e-6). Team A is the lexicographically smaller
/// centroid. Throws std::invalid_argument on fewer than 2 embeddings or
/// degenerate (all-identical) input.
TeamModel fit_team_model(const std::vector<std::vector<float>>& embeddings, std::uint64_t seed);

/// One-hot team assignment by nearest centroid; ties go to team A.
std::array<float, kTeamDim> team_onehot(const std::vector<float>& embedding, const TeamModel& model);
inline std::array<float, kTeamDim> referee_onehot() { return {0.f, 0.f, 1.f}; }

/// Apply a frame-to-field homography to the bbox middle point. Throws
/// std::domain_error when the projected point is at infinity.
std::pair<double, double> project_to_field(const BBox& bbox, const Homography& h);

/// Fill gaps by element-wise linear interpolation between the bracketing
/// known matrices; frames outside the known range copy the nearest matrix.
/// Known frames are returned unchanged. Throws on an empty known map.
std::map<int, Homography> interpolate_homographies(const std::map<int, Homography>& known,
                                                   const std::vector<int>& target_frames);

/// Per-detection features plus the raw detections, both indexed by det_id.
struct FeatureStore {
  std::vector<Detection> detections;
  std::vector<FeatureBundle> bundles;
  TeamModel team_model;  // fitted only when the sidecar carries embeddings
  std::vector<std::string> diagnostics;
};

/// Assemble feature bundles for a parsed sequence: jersey vectors, team
/// one-hots (clustering the first N player embeddings when needed), and
/// positions under the configured spatial mode.
FeatureStore build_feature_store(const SequenceBundle& bundle);

struct SimilarityContext {
  FeatureMask mask;
  SpatialMode mode = SpatialMode::Field;
  long long span = 256;     // max_temporal_span(L), normalizes the dt channel
  double image_diag = 1.0;  // frame-mode center distance normalization
};

/// Edge feature vector between two temporally ordered tracklets, using a's
/// trailing and b's leading detection for position. Channel order:
/// appearance cos, jersey cos, jersey validity, team cos, spatial, iou, dt.
std::vector<float> node_similarities(const Tracklet& a, const Tracklet& b,
                                     const FeatureStore& store, const SimilarityContext& ctx);

}  // namespace hgtrack
