// Edge classification: per-level feature encoders feeding a shared scoring
// head. Two kinds: a plain logistic scorer and a message-passing scorer that
// runs M rounds of time-aware node/edge updates before the head. Training is
// full-batch Adam on binary cross-entropy, staged level by level before a
// joint pass; gradients are analytic and checked against finite differences.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hgtrack/model.hpp"

namespace hgtrack {

/// Dense affine map, W row-major (out x in).
struct AffineLayer {
  int in = 0;
  int out = 0;
  std::vector<double> W;
  std::vector<double> b;
};

struct ScorerWeights {
  ScorerKind kind = ScorerKind::Logistic;
  int levels = 0;
  int feature_dim = 0;
  int hidden = 16;
  int rounds = 8;  // message-passing rounds; unused by the logistic kind
  std::string feature_layout;

  std::vector<AffineLayer> encoders;  // one per level, feature_dim -> hidden
  std::vector<double> head_w;         // hidden -> 1
  double head_b = 0.0;
  AffineLayer edge_update;  // 4*hidden -> hidden (message passing only)
  AffineLayer node_update;  // 3*hidden -> hidden (message passing only)
};

/// Random small-uniform initialization, deterministic under seed.
ScorerWeights init_scorer_weights(ScorerKind kind, int levels, int feature_dim, int hidden,
                                  int rounds, const std::string& feature_layout,
                                  std::uint64_t seed);

/// Scores in [0,1], one per edge, in edge order. Deterministic given
/// weights; throws std::invalid_argument on level or dimension mismatch.
std::vector<double> score_edges(const AssocGraph& g, const ScorerWeights& w);

/// Convenience: score_edges written back into g.edges[i].score.
void score_graph(AssocGraph& g, const ScorerWeights& w);

struct LabeledGraph {
  AssocGraph graph;
  std::vector<std::uint8_t> labels;  // 1 = same identity, per edge
};

struct TrainOptions {
  double learning_rate = 1e-3;
  int level_iters = 500;  // per-level warmup iterations
  int joint_epochs = 250;
  std::uint64_t seed = 0;
  std::ostream* log = nullptr;  // optional line-oriented training log
};

struct TrainResult {
  ScorerWeights weights;
  double final_loss = 0.0;
  int steps = 0;
};

/// Staged training: levels unfreeze one at a time (level l trains on graphs
/// of level <= l for level_iters iterations), then a joint pass over all
/// graphs for joint_epochs. Throws std::invalid_argument when the data has
/// no edges and std::runtime_error when the loss diverges to NaN.
TrainResult train_scorer(const std::vector<LabeledGraph>& data, ScorerWeights init,
                         const TrainOptions& opts);

/// Mean binary cross-entropy over every edge in the batch (0 for an empty
/// batch); when grad_out is non-null it receives d(loss)/d(weights) in the
/// flattened parameter order.
double scorer_loss(const ScorerWeights& w, const std::vector<LabeledGraph>& batch,
                   std::vector<double>* grad_out);

/// Max relative error between analytic and central finite-difference
/// gradients over all coordinates, or a seeded random subset of at least
/// max_coords when the parameter count is larger.
double gradient_check(const ScorerWeights& w, const std::vector<LabeledGraph>& batch,
                      double epsilon, std::uint64_t seed = 0, int max_coords = 200);

std::vector<double> flatten_weights(const ScorerWeights& w);
void unflatten_weights(ScorerWeights& w, const std::vector<double>& flat);

/// Named-array JSON weight file; lossless round-trip. load throws on version
/// or layout mismatch and names any missing array.
void save_weights(const ScorerWeights& w, const std::string& path);
ScorerWeights load_weights(const std::string& path);

}  // namespace hgtrack
