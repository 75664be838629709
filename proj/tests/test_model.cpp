#include <doctest.h>

#include <stdexcept>

#include "hgtrack/model.hpp"

using namespace hgtrack;

TEST_CASE("max_temporal_span follows the 2^(L+1) window schedule") {
  CHECK(max_temporal_span(1) == 4);
  CHECK(max_temporal_span(2) == 8);
  CHECK(max_temporal_span(7) == 256);
  CHECK(max_temporal_span(9) == 1024);
  CHECK(max_temporal_span(10) == 2048);
  CHECK_THROWS_AS(max_temporal_span(0), std::invalid_argument);
}

TEST_CASE("max_temporal_span never shrinks with more levels") {
  for (int l = 1; l < 20; ++l) CHECK(max_temporal_span(l + 1) > max_temporal_span(l));
}

TEST_CASE("validate_trackset") {
  TrackSet ts;
  SUBCASE("empty set is valid") { CHECK(validate_trackset(ts).empty()); }

  SUBCASE("non-increasing frames are flagged") {
    Track t;
    t.track_id = 0;
    t.entries = {{3, {0, 0, 1, 1}, 1.f, 0}, {2, {0, 0, 1, 1}, 1.f, 1}};
    ts.tracks.push_back(t);
    auto v = validate_trackset(ts);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("non-increasing frame") != std::string::npos);
  }

  SUBCASE("two tracks sharing a detection are flagged") {
    Track a, b;
    a.track_id = 0;
    b.track_id = 1;
    a.entries = {{5, {0, 0, 1, 1}, 1.f, 7}};
    b.entries = {{5, {9, 9, 1, 1}, 1.f, 7}};
    ts.tracks = {a, b};
    auto v = validate_trackset(ts);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("shared detection") != std::string::npos);
  }
}

TEST_CASE("feature layout tags round-trip") {
  FeatureMask masks[] = {
      {true, true, true, true, false, true},
      {true, false, false, true, false, true},
      {true, true, false, true, true, false},
      {false, false, false, false, false, false},
  };
  for (const FeatureMask& m : masks) {
    for (SpatialMode mode : {SpatialMode::Field, SpatialMode::Frame}) {
      std::string tag = feature_layout_tag(m, mode);
      FeatureMask back;
      SpatialMode back_mode;
      parse_feature_layout_tag(tag, back, back_mode);
      CHECK(back == m);
      if (m.spatial) CHECK(back_mode == mode);
      int dim = edge_feature_dim(m, mode);
      int expect = (m.appearance ? 1 : 0) + (m.jersey ? 2 : 0) + (m.team ? 1 : 0) +
                   (m.spatial ? (mode == SpatialMode::Field ? 1 : 2) : 0) + (m.iou ? 1 : 0) +
                   (m.time ? 1 : 0);
      CHECK(dim == expect);
    }
  }
  CHECK_THROWS_AS(
      [] {
        FeatureMask m;
        SpatialMode mode;
        parse_feature_layout_tag("app,bogus", m, mode);
      }(),
      std::invalid_argument);
}
