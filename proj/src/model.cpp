#include "hgtrack/model.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace hgtrack {

int edge_feature_dim(const FeatureMask& mask, SpatialMode mode) {
  int dim = 0;
  if (mask.appearance) dim += 1;
  if (mask.jersey) dim += 2;  // similarity + validity flag
  if (mask.team) dim += 1;
  if (mask.spatial) dim += (mode == SpatialMode::Field) ? 1 : 2;
  if (mask.iou) dim += 1;
  if (mask.time) dim += 1;
  return dim;
}

std::string feature_layout_tag(const FeatureMask& mask, SpatialMode mode) {
  std::string tag;
  auto add = [&tag](const char* name) {
    if (!tag.empty()) tag += ',';
    tag += name;
  };
  if (mask.appearance) add("app");
  if (mask.jersey) add("jersey");
  if (mask.team) add("team");
  if (mask.spatial) add(mode == SpatialMode::Field ? "field" : "frame");
  if (mask.iou) add("iou");
  if (mask.time) add("dt");
  return tag.empty() ? "none" : tag;
}

void parse_feature_layout_tag(const std::string& tag, FeatureMask& mask, SpatialMode& mode) {
  mask = FeatureMask{false, false, false, false, false, false};
  mode = SpatialMode::Field;
  if (tag == "none") return;
  std::stringstream ss(tag);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "app") mask.appearance = true;
    else if (part == "jersey") mask.jersey = true;
    else if (part == "team") mask.team = true;
    else if (part == "field") { mask.spatial = true; mode = SpatialMode::Field; }
    else if (part == "frame") { mask.spatial = true; mode = SpatialMode::Frame; }
    else if (part == "iou") mask.iou = true;
    else if (part == "dt") mask.time = true;
    else throw std::invalid_argument("unknown feature layout channel: " + part);
  }
}

long long max_temporal_span(int levels) {
  if (levels < 1) throw std::invalid_argument("max_temporal_span: levels must be >= 1");
  return 1LL << (levels + 1);
}

std::vector<std::string> validate_trackset(const TrackSet& ts) {
  std::vector<std::string> violations;
  std::set<std::pair<int, int>> seen;  // (frame, det_id) across tracks
  for (const Track& track : ts.tracks) {
    int prev_frame = -1;
    for (const TrackEntry& e : track.entries) {
      if (e.frame <= prev_frame) {
        std::ostringstream os;
        os << "track " << track.track_id << ": non-increasing frame " << e.frame
           << " after " << prev_frame;
        violations.push_back(os.str());
      }
      prev_frame = e.frame;
      if (e.det_id >= 0) {
        if (!seen.insert({e.frame, e.det_id}).second) {
          std::ostringstream os;
          os << "track " << track.track_id << ": shared detection " << e.det_id
             << " at frame " << e.frame;
          violations.push_back(os.str());
        }
      }
    }
  }
  return violations;
}

bool same_structure(const TrackSet& a, const TrackSet& b) {
  if (a.tracks.size() != b.tracks.size()) return false;
  for (size_t t = 0; t < a.tracks.size(); ++t) {
    const Track& ta = a.tracks[t];
    const Track& tb = b.tracks[t];
    if (ta.track_id != tb.track_id || ta.entries.size() != tb.entries.size()) return false;
    for (size_t i = 0; i < ta.entries.size(); ++i) {
      const TrackEntry& ea = ta.entries[i];
      const TrackEntry& eb = tb.entries[i];
      if (ea.frame != eb.frame || !(ea.bbox == eb.bbox) || ea.confidence != eb.confidence)
        return false;
    }
  }
  return true;
}

}  // namespace hgtrack
