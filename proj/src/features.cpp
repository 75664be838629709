#include "hgtrack/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hgtrack {

double cosine(const float* a, const float* b, size_t n) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < n; ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
  return cosine(a.data(), b.data(), a.size());
}

std::pair<std::array<float, kJerseyDim>, bool> jersey_vector(const CharConfidences& cc) {
  std::array<float, kJerseyDim> out{};
  // argmax over c1; EOL (index 0) wins ties, marking the crop illegible.
  int best = 0;
  for (int i = 1; i < kCharDim; ++i)
    if (cc.c1[i] > cc.c1[best]) best = i;
  if (best == 0) return {out, false};
  for (int d = 0; d <= 9; ++d)
    out[d] = static_cast<float>(static_cast<double>(cc.c1[1 + d]) * cc.c2[0]);
  for (int i = 1; i <= 9; ++i)
    for (int j = 0; j <= 9; ++j)
      out[10 * i + j] = static_cast<float>(static_cast<double>(cc.c1[1 + i]) * cc.c2[1 + j]);
  return {out, true};
}

namespace {

double sq_dist(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

bool lex_less(const std::vector<float>& a, const std::vector<float>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

TeamModel fit_team_model(const std::vector<std::vector<float>>& embeddings, std::uint64_t seed) {
  const size_t n = embeddings.size();
  if (n < 2) throw std::invalid_argument("fit_team_model: need at least 2 player embeddings");
  const size_t dim = embeddings[0].size();
  for (const auto& e : embeddings)
    if (e.size() != dim) throw std::invalid_argument("fit_team_model: dimension mismatch");

  size_t first = seed % n;
  size_t second = first;
  double best = -1.0;
  for (size_t i = 0; i < n; ++i) {
    double d = sq_dist(embeddings[first], embeddings[i]);
    if (d > best) {
      best = d;
      second = i;
    }
  }
  if (best <= 1e-18)
    throw std::invalid_argument("fit_team_model: degenerate clustering (all embeddings identical)");

  std::vector<double> ca(embeddings[first].begin(), embeddings[first].end());
  std::vector<double> cb(embeddings[second].begin(), embeddings[second].end());
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    for (size_t i = 0; i < n; ++i) {
      double da = 0, db = 0;
      for (size_t k = 0; k < dim; ++k) {
        double xa = embeddings[i][k] - ca[k];
        double xb = embeddings[i][k] - cb[k];
        da += xa * xa;
        db += xb * xb;
      }
      assign[i] = db < da ? 1 : 0;  // ties stay with the first cluster
    }
    std::vector<double> na(dim, 0), nb(dim, 0);
    size_t count_a = 0, count_b = 0;
    for (size_t i = 0; i < n; ++i) {
      auto& acc = assign[i] == 0 ? na : nb;
      for (size_t k = 0; k < dim; ++k) acc[k] += embeddings[i][k];
      (assign[i] == 0 ? count_a : count_b)++;
    }
    // An emptied cluster restarts at the point farthest from the other centroid.
    if (count_a == 0 || count_b == 0) {
      const std::vector<double>& other = count_a == 0 ? cb : ca;
      size_t far = 0;
      double far_d = -1;
      for (size_t i = 0; i < n; ++i) {
        double d = 0;
        for (size_t k = 0; k < dim; ++k) {
          double x = embeddings[i][k] - other[k];
          d += x * x;
        }
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      auto& dead = count_a == 0 ? na : nb;
      for (size_t k = 0; k < dim; ++k) dead[k] = embeddings[far][k];
      (count_a == 0 ? count_a : count_b) = 1;
    } else {
      for (size_t k = 0; k < dim; ++k) {
        na[k] /= static_cast<double>(count_a);
        nb[k] /= static_cast<double>(count_b);
      }
    }
    double movement = 0;
    for (size_t k = 0; k < dim; ++k) {
      movement += (na[k] - ca[k]) * (na[k] - ca[k]);
      movement += (nb[k] - cb[k]) * (nb[k] - cb[k]);
    }
    ca = std::move(na);
    cb = std::move(nb);
    if (std::sqrt(movement) < 1e-6) break;
  }

  TeamModel model;
  model.centroid_a.assign(ca.begin(), ca.end());
  model.centroid_b.assign(cb.begin(), cb.end());
  double sep = sq_dist(model.centroid_a, model.centroid_b);
  if (sep <= 1e-18)
    throw std::invalid_argument("fit_team_model: degenerate clustering (coincident centroids)");
  if (!lex_less(model.centroid_a, model.centroid_b)) std::swap(model.centroid_a, model.centroid_b);
  model.fitted = true;
  return model;
}

std::array<float, kTeamDim> team_onehot(const std::vector<float>& embedding,
                                        const TeamModel& model) {
  if (!model.fitted) throw std::logic_error("team_onehot: model not fitted");
  double da = sq_dist(embedding, model.centroid_a);
  double db = sq_dist(embedding, model.centroid_b);
  return da <= db ? std::array<float, kTeamDim>{1.f, 0.f, 0.f}
                  : std::array<float, kTeamDim>{0.f, 1.f, 0.f};
}

std::pair<double, double> project_to_field(const BBox& bbox, const Homography& h) {
  double cx = bbox.cx(), cy = bbox.cy();
  double px = h.m[0] * cx + h.m[1] * cy + h.m[2];
  double py = h.m[3] * cx + h.m[4] * cy + h.m[5];
  double pw = h.m[6] * cx + h.m[7] * cy + h.m[8];
  if (std::abs(pw) < 1e-9)
    throw std::domain_error("project_to_field: projected point at infinity");
  return {px / pw, py / pw};
}

std::map<int, Homography> interpolate_homographies(const std::map<int, Homography>& known,
                                                   const std::vector<int>& target_frames) {
  if (known.empty())
    throw std::invalid_argument("interpolate_homographies: no known homographies");
  std::map<int, Homography> out;
  for (int t : target_frames) {
    auto it = known.find(t);
    if (it != known.end()) {
      out[t] = it->second;
      continue;
    }
    auto hi = known.upper_bound(t);
    if (hi == known.begin()) {
      out[t] = hi->second;  // before the first known frame
      continue;
    }
    if (hi == known.end()) {
      out[t] = std::prev(hi)->second;  // past the last known frame
      continue;
    }
    auto lo = std::prev(hi);
    double alpha = static_cast<double>(t - lo->first) / (hi->first - lo->first);
    Homography h;
    for (int i = 0; i < 9; ++i) h.m[i] = (1.0 - alpha) * lo->second.m[i] + alpha * hi->second.m[i];
    out[t] = h;
  }
  return out;
}

FeatureStore build_feature_store(const SequenceBundle& bundle) {
  FeatureStore store;
  store.detections = bundle.detections;
  store.bundles.resize(bundle.detections.size());
  const EngineConfig& cfg = bundle.config;

  // Fitted team model: cluster the first N player embeddings in temporal order.
  const bool embedding_mode = bundle.features.team_block == TeamBlock::Embedding;
  if (embedding_mode && !bundle.detections.empty()) {
    std::vector<int> order(bundle.detections.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Detection& da = bundle.detections[a];
      const Detection& db = bundle.detections[b];
      return da.frame != db.frame ? da.frame < db.frame : da.det_id < db.det_id;
    });
    std::vector<std::vector<float>> players;
    for (int idx : order) {
      const RawFeatureRecord& rec = bundle.features.records.at(idx);
      if (rec.referee) continue;
      players.push_back(rec.team_embedding);
      if (static_cast<int>(players.size()) >= cfg.team_cluster_n) break;
    }
    store.team_model = fit_team_model(players, cfg.seed);
  }

  // Field positions need a homography for every frame.
  std::map<int, Homography> per_frame;
  if (cfg.spatial_mode == SpatialMode::Field) {
    std::vector<int> frames;
    frames.reserve(bundle.detections.size());
    for (const Detection& d : bundle.detections) frames.push_back(d.frame);
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
    if (!frames.empty()) per_frame = interpolate_homographies(bundle.homographies, frames);
  }

  for (const Detection& d : bundle.detections) {
    const RawFeatureRecord& rec = bundle.features.records.at(d.det_id);
    FeatureBundle& fb = store.bundles[d.det_id];
    fb.appearance = rec.appearance;
    double norm = 0;
    for (float v : fb.appearance) norm += static_cast<double>(v) * v;
    if (norm <= 0.0)
      store.diagnostics.push_back("det " + std::to_string(d.det_id) +
                                  ": zero-norm appearance vector");

    if (rec.jersey) {
      auto [vec, legible] = jersey_vector(*rec.jersey);
      fb.jersey = vec;
      fb.jersey_legible = legible;
    }

    if (embedding_mode) {
      fb.team = rec.referee ? referee_onehot() : team_onehot(rec.team_embedding, store.team_model);
    } else {
      fb.team = {0.f, 0.f, 0.f};
      fb.team[rec.team_label] = 1.f;
    }

    if (cfg.spatial_mode == SpatialMode::Field) {
      auto [fx, fy] = project_to_field(d.bbox, per_frame.at(d.frame));
      fb.position = {SpatialMode::Field, static_cast<float>(fx), static_cast<float>(fy), 0.f, 0.f};
    } else {
      fb.position = {SpatialMode::Frame, static_cast<float>(d.bbox.cx()),
                     static_cast<float>(d.bbox.cy()), d.bbox.w, d.bbox.h};
    }
  }
  return store;
}

namespace {

double bbox_iou(const BBox& a, const BBox& b) {
  double x1 = std::max(a.x, b.x);
  double y1 = std::max(a.y, b.y);
  double x2 = std::min(static_cast<double>(a.x) + a.w, static_cast<double>(b.x) + b.w);
  double y2 = std::min(static_cast<double>(a.y) + a.h, static_cast<double>(b.y) + b.h);
  double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

}  // namespace

std::vector<float> node_similarities(const Tracklet& a, const Tracklet& b,
                                     const FeatureStore& store, const SimilarityContext& ctx) {
  std::vector<float> out;
  out.reserve(static_cast<size_t>(edge_feature_dim(ctx.mask, ctx.mode)));
  if (ctx.mask.appearance)
    out.push_back(static_cast<float>(cosine(a.agg_appearance, b.agg_appearance)));
  if (ctx.mask.jersey) {
    bool valid = a.jersey_legible && b.jersey_legible;
    double sim = valid ? cosine(a.agg_jersey.data(), b.agg_jersey.data(), kJerseyDim) : 0.0;
    out.push_back(static_cast<float>(sim));
    out.push_back(valid ? 1.f : 0.f);
  }
  if (ctx.mask.team)
    out.push_back(static_cast<float>(cosine(a.agg_team.data(), b.agg_team.data(), kTeamDim)));

  const Position& pa = store.bundles[a.last_det].position;
  const Position& pb = store.bundles[b.first_det].position;
  if (ctx.mask.spatial) {
    double dx = static_cast<double>(pb.x) - pa.x;
    double dy = static_cast<double>(pb.y) - pa.y;
    double dist = std::sqrt(dx * dx + dy * dy);
    if (ctx.mode == SpatialMode::Field) {
      out.push_back(static_cast<float>(dist));
    } else {
      out.push_back(static_cast<float>(dist / ctx.image_diag));
      double area_a = static_cast<double>(pa.w) * pa.h;
      double area_b = static_cast<double>(pb.w) * pb.h;
      out.push_back(static_cast<float>(0.5 * std::log(area_a / area_b)));
    }
  }
  if (ctx.mask.iou) {
    const BBox& ba = store.detections[a.last_det].bbox;
    const BBox& bb = store.detections[b.first_det].bbox;
    out.push_back(static_cast<float>(bbox_iou(ba, bb)));
  }
  if (ctx.mask.time) {
    double dt = static_cast<double>(b.first_frame) - a.last_frame;
    out.push_back(static_cast<float>(dt / static_cast<double>(ctx.span)));
  }
  return out;
}

}  // namespace hgtrack
