// HOTA-family evaluation between predicted and ground-truth track sets, and
// the frame-gap re-identification analysis. Scores are averaged over the
// standard 19-threshold IoU grid.
#pragma once

#include <string>
#include <vector>

#include "hgtrack/features.hpp"
#include "hgtrack/model.hpp"

namespace hgtrack {

/// The standard alpha grid {0.05, 0.10, ..., 0.95}.
std::vector<double> hota_alphas();

struct AlphaMetrics {
  double alpha = 0;
  double hota = 0;  // fractions in [0,1] at this alpha
  double deta = 0;
  double assa = 0;
  long long tp = 0, fn = 0, fp = 0;
};

struct MetricReport {
  double hota = 0;  // percentages in [0,100], means over the alpha grid
  double deta = 0;
  double assa = 0;
  std::vector<AlphaMetrics> per_alpha;
  std::vector<std::string> warnings;
};

/// Per alpha: bijective per-frame matching between prediction and ground
/// truth over pairs with IoU >= alpha, maximizing the association alignment
/// score; DetA = TP/(TP+FN+FP), AssA the mean TPA/(TPA+FNA+FPA) over TPs,
/// HOTA(alpha) = sqrt(DetA * AssA). Throws std::invalid_argument when either
/// input carries two boxes of one id in one frame.
MetricReport evaluate(const TrackSet& pred, const TrackSet& gt);

std::string format_report(const MetricReport& r);      // aligned text table
std::string report_key_values(const MetricReport& r);  // machine-readable lines

struct GapAccuracy {
  int gap = 0;
  double accuracy = 0;   // fraction of correct nearest-identity matches
  long long pairs = 0;   // (identity, frame) pairs evaluated
  long long skipped = 0; // identity visible at i but not at i+gap
};

/// For each gap N and each identity visible in frames i and i+N: correct iff
/// the cosine-nearest detection feature in frame i+N belongs to the same
/// identity. Ground-truth boxes are associated to detections by exact
/// (frame, bbox) match.
std::vector<GapAccuracy> reid_gap_analysis(const FeatureStore& store, const TrackSet& gt,
                                           const std::vector<int>& gaps);

}  // namespace hgtrack
