#include "hgtrack/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hgtrack/assignment.hpp"
#include "hgtrack/text.hpp"

namespace hgtrack {

std::vector<double> hota_alphas() {
  std::vector<double> a;
  for (int k = 1; k <= 19; ++k) a.push_back(static_cast<double>(k) * 0.05);
  return a;
}

namespace {

double box_iou(const BBox& a, const BBox& b) {
  double x1 = std::max(a.x, b.x);
  double y1 = std::max(a.y, b.y);
  double x2 = std::min(static_cast<double>(a.x) + a.w, static_cast<double>(b.x) + b.w);
  double y2 = std::min(static_cast<double>(a.y) + a.h, static_cast<double>(b.y) + b.h);
  double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

struct FrameDet {
  int id;  // dense track index
  BBox box;
};

// Dense per-frame layout of one track set over [0, frames).
struct Detscape {
  std::vector<std::vector<FrameDet>> per_frame;
  std::vector<long long> id_count;  // detections per dense id
  int num_ids = 0;
};

Detscape layout(const TrackSet& ts, int frames, const char* which) {
  Detscape d;
  d.per_frame.resize(frames);
  d.num_ids = static_cast<int>(ts.tracks.size());
  d.id_count.assign(d.num_ids, 0);
  std::set<std::pair<int, int>> seen;  // (frame, dense id)
  for (size_t t = 0; t < ts.tracks.size(); ++t) {
    for (const TrackEntry& e : ts.tracks[t].entries) {
      if (e.frame < 0 || e.frame >= frames) continue;
      if (!seen.insert({e.frame, static_cast<int>(t)}).second)
        throw std::invalid_argument(std::string("evaluate: duplicate id in one frame in ") + which);
      d.per_frame[e.frame].push_back({static_cast<int>(t), e.bbox});
      ++d.id_count[t];
    }
  }
  return d;
}

}  // namespace

MetricReport evaluate(const TrackSet& pred, const TrackSet& gt) {
  MetricReport report;
  int frames = 0;
  int pred_max = -1, gt_max = -1;
  for (const Track& t : pred.tracks)
    for (const TrackEntry& e : t.entries) pred_max = std::max(pred_max, e.frame);
  for (const Track& t : gt.tracks)
    for (const TrackEntry& e : t.entries) gt_max = std::max(gt_max, e.frame);
  frames = std::max(pred_max, gt_max) + 1;
  if (pred_max != gt_max)
    report.warnings.push_back("frame ranges differ (pred max " + std::to_string(pred_max) +
                              ", gt max " + std::to_string(gt_max) + "); scoring the union range");

  Detscape P = layout(pred, frames, "prediction");
  Detscape G = layout(gt, frames, "ground truth");

  // Pass 1: Jaccard-normalized per-frame similarity accumulated into a
  // global alignment score per (gt, pred) id pair.
  std::vector<std::vector<double>> potential(G.num_ids, std::vector<double>(P.num_ids, 0.0));
  std::vector<std::vector<std::vector<double>>> frame_iou(frames);
  for (int f = 0; f < frames; ++f) {
    const auto& gdets = G.per_frame[f];
    const auto& pdets = P.per_frame[f];
    auto& iou = frame_iou[f];
    iou.assign(gdets.size(), std::vector<double>(pdets.size(), 0.0));
    std::vector<double> row_sum(gdets.size(), 0.0), col_sum(pdets.size(), 0.0);
    for (size_t gi = 0; gi < gdets.size(); ++gi)
      for (size_t pi = 0; pi < pdets.size(); ++pi) {
        double v = box_iou(gdets[gi].box, pdets[pi].box);
        iou[gi][pi] = v;
        row_sum[gi] += v;
        col_sum[pi] += v;
      }
    for (size_t gi = 0; gi < gdets.size(); ++gi)
      for (size_t pi = 0; pi < pdets.size(); ++pi) {
        double denom = row_sum[gi] + col_sum[pi] - iou[gi][pi];
        if (denom > 1e-12 && iou[gi][pi] > 0.0)
          potential[gdets[gi].id][pdets[pi].id] += iou[gi][pi] / denom;
      }
  }
  std::vector<std::vector<double>> alignment(G.num_ids, std::vector<double>(P.num_ids, 0.0));
  for (int g = 0; g < G.num_ids; ++g)
    for (int p = 0; p < P.num_ids; ++p) {
      double denom = static_cast<double>(G.id_count[g]) + P.id_count[p] - potential[g][p];
      if (denom > 1e-12) alignment[g][p] = potential[g][p] / denom;
    }

  long long total_gt = 0, total_pred = 0;
  for (long long c : G.id_count) total_gt += c;
  for (long long c : P.id_count) total_pred += c;

  // Pass 2, per alpha: per-frame maximum-weight matching over candidate
  // pairs, weighted by alignment * IoU.
  for (double alpha : hota_alphas()) {
    long long tp = 0;
    std::map<std::pair<int, int>, long long> matches;
    for (int f = 0; f < frames; ++f) {
      const auto& gdets = G.per_frame[f];
      const auto& pdets = P.per_frame[f];
      if (gdets.empty() || pdets.empty()) continue;
      std::vector<std::vector<double>> weight(gdets.size(), std::vector<double>(pdets.size(), 0.0));
      bool any = false;
      for (size_t gi = 0; gi < gdets.size(); ++gi)
        for (size_t pi = 0; pi < pdets.size(); ++pi) {
          double v = frame_iou[f][gi][pi];
          if (v >= alpha) {
            weight[gi][pi] = alignment[gdets[gi].id][pdets[pi].id] * v;
            any = true;
          }
        }
      if (!any) continue;
      std::vector<int> match = max_weight_assignment(weight);
      for (size_t gi = 0; gi < gdets.size(); ++gi) {
        int pi = match[gi];
        if (pi < 0) continue;
        ++tp;
        ++matches[{gdets[gi].id, pdets[pi].id}];
      }
    }
    long long fn = total_gt - tp;
    long long fp = total_pred - tp;
    double ass_sum = 0.0;
    for (const auto& [pair, mc] : matches) {
      double denom =
          static_cast<double>(G.id_count[pair.first]) + P.id_count[pair.second] - mc;
      ass_sum += static_cast<double>(mc) * (static_cast<double>(mc) / denom);
    }
    AlphaMetrics am;
    am.alpha = alpha;
    am.tp = tp;
    am.fn = fn;
    am.fp = fp;
    long long det_denom = tp + fn + fp;
    am.deta = det_denom > 0 ? static_cast<double>(tp) / det_denom : 0.0;
    am.assa = tp > 0 ? ass_sum / static_cast<double>(tp) : 0.0;
    am.hota = std::sqrt(am.deta * am.assa);
    report.per_alpha.push_back(am);
  }

  double h = 0, d = 0, a = 0;
  for (const AlphaMetrics& am : report.per_alpha) {
    h += am.hota;
    d += am.deta;
    a += am.assa;
  }
  const double n = static_cast<double>(report.per_alpha.size());
  report.hota = 100.0 * h / n;
  report.deta = 100.0 * d / n;
  report.assa = 100.0 * a / n;
  return report;
}

std::string format_report(const MetricReport& r) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof(line), "%-8s %8s %8s %8s\n", "", "HOTA", "DetA", "AssA");
  os << line;
  std::snprintf(line, sizeof(line), "%-8s %8.2f %8.2f %8.2f\n", "overall", r.hota, r.deta, r.assa);
  os << line;
  for (const AlphaMetrics& am : r.per_alpha) {
    std::snprintf(line, sizeof(line), "a=%.2f   %8.2f %8.2f %8.2f  TP %lld FN %lld FP %lld\n",
                  am.alpha, 100.0 * am.hota, 100.0 * am.deta, 100.0 * am.assa, am.tp, am.fn, am.fp);
    os << line;
  }
  for (const std::string& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

std::string report_key_values(const MetricReport& r) {
  std::ostringstream os;
  os << "HOTA " << format_real(r.hota) << "\nDetA " << format_real(r.deta) << "\nAssA "
     << format_real(r.assa) << '\n';
  for (const AlphaMetrics& am : r.per_alpha)
    os << "alpha " << format_real(am.alpha) << " hota " << format_real(100.0 * am.hota) << " deta "
       << format_real(100.0 * am.deta) << " assa " << format_real(100.0 * am.assa) << " tp "
       << am.tp << " fn " << am.fn << " fp " << am.fp << '\n';
  return os.str();
}

std::vector<GapAccuracy> reid_gap_analysis(const FeatureStore& store, const TrackSet& gt,
                                           const std::vector<int>& gaps) {
  // Associate ground-truth boxes with detections by exact (frame, bbox)
  // match; ambiguity resolves to the smallest det_id.
  using BoxKey = std::tuple<int, std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>;
  auto key = [](int frame, const BBox& b) {
    return BoxKey{frame, std::bit_cast<std::uint32_t>(b.x), std::bit_cast<std::uint32_t>(b.y),
                  std::bit_cast<std::uint32_t>(b.w), std::bit_cast<std::uint32_t>(b.h)};
  };
  std::map<BoxKey, int> det_index;  // smallest det_id per exact box
  for (const Detection& d : store.detections) {
    auto [it, inserted] = det_index.emplace(key(d.frame, d.bbox), d.det_id);
    if (!inserted && d.det_id < it->second) it->second = d.det_id;
  }

  // identity -> frame -> det_id
  std::map<int, std::map<int, int>> by_identity;
  for (const Track& tr : gt.tracks) {
    for (const TrackEntry& e : tr.entries) {
      auto it = det_index.find(key(e.frame, e.bbox));
      if (it != det_index.end()) by_identity[tr.track_id][e.frame] = it->second;
    }
  }
  // frame -> list of (identity, det_id), ordered by det_id
  std::map<int, std::vector<std::pair<int, int>>> frame_dets;
  for (const auto& [identity, frames] : by_identity)
    for (const auto& [frame, det] : frames) frame_dets[frame].push_back({identity, det});
  for (auto& [frame, dets] : frame_dets)
    std::sort(dets.begin(), dets.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });

  std::vector<GapAccuracy> out;
  for (int gap : gaps) {
    GapAccuracy acc;
    acc.gap = gap;
    long long correct = 0;
    for (const auto& [identity, frames] : by_identity) {
      for (const auto& [frame, det] : frames) {
        auto target = frame_dets.find(frame + gap);
        if (target == frame_dets.end()) {
          ++acc.skipped;
          continue;
        }
        bool identity_present = false;
        for (const auto& [cid, cdet] : target->second)
          if (cid == identity) identity_present = true;
        if (!identity_present) {
          ++acc.skipped;
          continue;
        }
        const std::vector<float>& query = store.bundles[det].appearance;
        double best = -2.0;
        int best_identity = -1;
        for (const auto& [cid, cdet] : target->second) {
          double sim = cosine(query, store.bundles[cdet].appearance);
          if (sim > best) {
            best = sim;
            best_identity = cid;
          }
        }
        ++acc.pairs;
        if (best_identity == identity) ++correct;
      }
    }
    acc.accuracy = acc.pairs > 0 ? static_cast<double>(correct) / acc.pairs : 0.0;
    out.push_back(acc);
  }
  return out;
}

}  // namespace hgtrack
