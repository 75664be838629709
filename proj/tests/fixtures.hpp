// Shared helpers for building small in-memory feature stores in tests.
#pragma once

#include <array>
#include <vector>

#include "hgtrack/features.hpp"
#include "hgtrack/model.hpp"

namespace fixtures {

using namespace hgtrack;

inline int add_detection(FeatureStore& store, int frame, const BBox& bbox,
                         std::vector<float> appearance, float field_x, float field_y,
                         std::array<float, kTeamDim> team = {1.f, 0.f, 0.f},
                         std::array<float, kJerseyDim> jersey = {}, bool legible = false) {
  Detection d;
  d.frame = frame;
  d.bbox = bbox;
  d.confidence = 1.f;
  d.det_id = static_cast<int>(store.detections.size());
  store.detections.push_back(d);
  FeatureBundle fb;
  fb.appearance = std::move(appearance);
  fb.jersey = jersey;
  fb.jersey_legible = legible;
  fb.team = team;
  fb.position = {SpatialMode::Field, field_x, field_y, 0.f, 0.f};
  store.bundles.push_back(std::move(fb));
  return d.det_id;
}

inline int add_frame_detection(FeatureStore& store, int frame, const BBox& bbox,
                               std::vector<float> appearance) {
  int id = add_detection(store, frame, bbox, std::move(appearance), 0.f, 0.f);
  store.bundles[id].position = {SpatialMode::Frame, static_cast<float>(bbox.cx()),
                                static_cast<float>(bbox.cy()), bbox.w, bbox.h};
  return id;
}

}  // namespace fixtures
