#include "hgtrack/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hgtrack/text.hpp"

namespace hgtrack {

using nlohmann::json;

double Homography::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  double d = det();
  if (std::abs(d) <= 1e-12) throw std::domain_error("singular homography");
  Homography r;
  r.m[0] = (m[4] * m[8] - m[5] * m[7]) / d;
  r.m[1] = (m[2] * m[7] - m[1] * m[8]) / d;
  r.m[2] = (m[1] * m[5] - m[2] * m[4]) / d;
  r.m[3] = (m[5] * m[6] - m[3] * m[8]) / d;
  r.m[4] = (m[0] * m[8] - m[2] * m[6]) / d;
  r.m[5] = (m[2] * m[3] - m[0] * m[5]) / d;
  r.m[6] = (m[3] * m[7] - m[4] * m[6]) / d;
  r.m[7] = (m[1] * m[6] - m[0] * m[7]) / d;
  r.m[8] = (m[0] * m[4] - m[1] * m[3]) / d;
  return r;
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  return out;
}

}  // namespace

MotData parse_mot(const std::string& path) {
  std::ifstream in = open_input(path);
  MotData data;
  std::map<int, Track> by_id;
  std::string line;
  int line_no = 0;
  int next_det = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (row.front() == '#') {
      data.diagnostics.push_back(path + ":" + std::to_string(line_no) + ": skipped comment line");
      continue;
    }
    auto cols = split(row, ',');
    if (cols.size() < 7)
      throw ParseError(path, line_no, "expected at least 7 comma-separated columns");
    long long frame = 0, id = 0;
    if (!parse_int(trim(cols[0]), frame))
      throw ParseError(path, line_no, "bad frame value '" + std::string(cols[0]) + "'");
    if (!parse_int(trim(cols[1]), id))
      throw ParseError(path, line_no, "bad id value '" + std::string(cols[1]) + "'");
    if (frame < 1) throw ParseError(path, line_no, "frame must be 1-based on disk");
    if (id == 0 || id < -1)
      throw ParseError(path, line_no, "id must be -1 or a positive integer");
    BBox box;
    float conf = 0.f;
    float* fields[5] = {&box.x, &box.y, &box.w, &box.h, &conf};
    for (int i = 0; i < 5; ++i) {
      if (!parse_real(trim(cols[2 + i]), *fields[i]))
        throw ParseError(path, line_no, "bad numeric value '" + std::string(cols[2 + i]) + "'");
    }
    if (box.w < 0.f || box.h < 0.f)
      throw ParseError(path, line_no, "negative extent at line " + std::to_string(line_no));
    if (box.w == 0.f || box.h == 0.f)
      throw ParseError(path, line_no, "zero-area box at line " + std::to_string(line_no));
    if (conf < 0.f || conf > 1.f)
      throw ParseError(path, line_no, "confidence out of [0,1]");

    Detection det;
    det.frame = static_cast<int>(frame - 1);
    det.bbox = box;
    det.confidence = conf;
    det.det_id = next_det++;
    data.detections.push_back(det);

    if (id >= 1) {
      data.has_ids = true;
      Track& tr = by_id[static_cast<int>(id - 1)];
      tr.track_id = static_cast<int>(id - 1);
      tr.entries.push_back({det.frame, det.bbox, det.confidence, det.det_id});
    }
  }
  int max_frame = -1;
  for (const Detection& d : data.detections) max_frame = std::max(max_frame, d.frame);
  data.tracks.meta.frame_count = max_frame + 1;
  for (auto& [id, tr] : by_id) {
    std::sort(tr.entries.begin(), tr.entries.end(),
              [](const TrackEntry& a, const TrackEntry& b) { return a.frame < b.frame; });
    for (size_t i = 1; i < tr.entries.size(); ++i) {
      if (tr.entries[i].frame == tr.entries[i - 1].frame)
        throw ParseError(path, 0,
                         "track " + std::to_string(id + 1) + " has two boxes at frame " +
                             std::to_string(tr.entries[i].frame + 1));
    }
    data.tracks.tracks.push_back(std::move(tr));
  }
  return data;
}

void write_mot(const TrackSet& ts, const std::string& path) {
  struct Row {
    int frame;
    int id;
    const TrackEntry* e;
  };
  std::vector<Row> rows;
  for (const Track& tr : ts.tracks)
    for (const TrackEntry& e : tr.entries) rows.push_back({e.frame, tr.track_id, &e});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::ofstream out = open_output(path);
  for (const Row& r : rows) {
    out << (r.frame + 1) << ',' << (r.id + 1) << ',' << format_real(r.e->bbox.x) << ','
        << format_real(r.e->bbox.y) << ',' << format_real(r.e->bbox.w) << ','
        << format_real(r.e->bbox.h) << ',' << format_real(r.e->confidence) << ",-1,-1,-1\n";
  }
}

namespace {

constexpr const char* kFeatureMagic = "#hgtrack-features v1";

void expect_tokens(const std::string& path, int line_no, size_t got, size_t want) {
  if (got != want)
    throw ParseError(path, line_no,
                     "appearance dimension mismatch: expected " + std::to_string(want) +
                         " tokens, got " + std::to_string(got));
}

float parse_unit_interval(const std::string& path, int line_no, std::string_view tok) {
  float v;
  if (!parse_real(tok, v))
    throw ParseError(path, line_no, "bad numeric value '" + std::string(tok) + "'");
  if (v < 0.f || v > 1.f)
    throw ParseError(path, line_no, "confidence outside [0,1]: " + std::string(tok));
  return v;
}

}  // namespace

FeatureFile parse_features(const std::string& path) {
  std::ifstream in = open_input(path);
  FeatureFile f;
  std::string line;
  int line_no = 0;
  bool magic_seen = false, dim_seen = false, team_seen = false, jersey_seen = false;
  // Header
  while (in.peek() == '#' && std::getline(in, line)) {
    ++line_no;
    std::string_view h = trim(line);
    if (h == kFeatureMagic) {
      magic_seen = true;
      continue;
    }
    auto parts = split(h, ' ');
    if (parts.size() >= 2 && parts[0] == "#appearance_dim") {
      long long d;
      if (!parse_int(parts[1], d) || d < 1)
        throw ParseError(path, line_no, "bad appearance_dim");
      f.appearance_dim = static_cast<int>(d);
      dim_seen = true;
    } else if (parts.size() >= 2 && parts[0] == "#team") {
      if (parts[1] == "label") {
        f.team_block = TeamBlock::Label;
      } else if (parts[1] == "embedding" && parts.size() >= 3) {
        f.team_block = TeamBlock::Embedding;
        long long d;
        if (!parse_int(parts[2], d) || d < 1) throw ParseError(path, line_no, "bad team dim");
        f.team_dim = static_cast<int>(d);
      } else {
        throw ParseError(path, line_no, "team block must be 'label' or 'embedding <dim>'");
      }
      team_seen = true;
    } else if (parts.size() >= 2 && parts[0] == "#jersey") {
      if (parts[1] == "chars") f.jersey_present = true;
      else if (parts[1] == "none") f.jersey_present = false;
      else throw ParseError(path, line_no, "jersey block must be 'chars' or 'none'");
      jersey_seen = true;
    } else if (parts.size() >= 2 && parts[0] == "#spatial") {
      if (parts[1] == "field") f.spatial_hint = SpatialMode::Field;
      else if (parts[1] == "frame") f.spatial_hint = SpatialMode::Frame;
      else throw ParseError(path, line_no, "spatial hint must be 'field' or 'frame'");
    } else {
      throw ParseError(path, line_no, "unknown header line: " + std::string(h));
    }
  }
  if (!magic_seen || !dim_seen || !team_seen || !jersey_seen)
    throw ParseError(path, line_no,
                     "schema mismatch: header must declare magic, appearance_dim, team, jersey");

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    auto toks = split(row, ' ');
    size_t p = 0;
    long long det_id;
    if (!parse_int(toks[p++], det_id) || det_id < 0)
      throw ParseError(path, line_no, "bad det_id");
    RawFeatureRecord rec;
    rec.det_id = static_cast<int>(det_id);

    size_t team_tokens = f.team_block == TeamBlock::Label ? 1 : 1 + f.team_dim;
    size_t base = 1 + team_tokens + (f.jersey_present ? 1 : 0);
    if (toks.size() < base) expect_tokens(path, line_no, toks.size(), base + f.appearance_dim);

    if (f.team_block == TeamBlock::Label) {
      long long label;
      if (!parse_int(toks[p++], label) || label < 0 || label > 2)
        throw ParseError(path, line_no, "team label must be 0, 1, or 2");
      rec.team_label = static_cast<int>(label);
    } else {
      long long ref;
      if (!parse_int(toks[p++], ref) || (ref != 0 && ref != 1))
        throw ParseError(path, line_no, "referee flag must be 0 or 1");
      rec.referee = ref == 1;
      rec.team_embedding.resize(f.team_dim);
      for (int i = 0; i < f.team_dim; ++i) {
        if (!parse_real(toks[p], rec.team_embedding[i]))
          throw ParseError(path, line_no, "bad numeric value '" + std::string(toks[p]) + "'");
        ++p;
      }
    }

    bool has_jersey = false;
    if (f.jersey_present) {
      long long flag;
      if (!parse_int(toks[p++], flag) || (flag != 0 && flag != 1))
        throw ParseError(path, line_no, "jersey flag must be 0 or 1");
      has_jersey = flag == 1;
    }
    size_t want = 1 + team_tokens + (f.jersey_present ? 1 : 0) + (has_jersey ? 2 * kCharDim : 0) +
                  f.appearance_dim;
    expect_tokens(path, line_no, toks.size(), want);
    if (has_jersey) {
      CharConfidences cc;
      for (int i = 0; i < kCharDim; ++i) cc.c1[i] = parse_unit_interval(path, line_no, toks[p++]);
      for (int i = 0; i < kCharDim; ++i) cc.c2[i] = parse_unit_interval(path, line_no, toks[p++]);
      rec.jersey = cc;
    }
    rec.appearance.resize(f.appearance_dim);
    for (int i = 0; i < f.appearance_dim; ++i) {
      if (!parse_real(toks[p], rec.appearance[i]))
        throw ParseError(path, line_no, "bad numeric value '" + std::string(toks[p]) + "'");
      ++p;
    }
    if (!f.records.emplace(rec.det_id, std::move(rec)).second)
      throw ParseError(path, line_no, "duplicate det_id " + std::to_string(det_id));
  }
  return f;
}

void write_features(const FeatureFile& f, const std::string& path) {
  std::ofstream out = open_output(path);
  out << kFeatureMagic << "\n#appearance_dim " << f.appearance_dim << '\n';
  if (f.team_block == TeamBlock::Label) out << "#team label\n";
  else out << "#team embedding " << f.team_dim << '\n';
  out << "#jersey " << (f.jersey_present ? "chars" : "none") << '\n';
  if (f.spatial_hint)
    out << "#spatial " << (*f.spatial_hint == SpatialMode::Field ? "field" : "frame") << '\n';
  for (const auto& [det_id, rec] : f.records) {
    out << det_id;
    if (f.team_block == TeamBlock::Label) {
      out << ' ' << rec.team_label;
    } else {
      out << ' ' << (rec.referee ? 1 : 0);
      for (float v : rec.team_embedding) out << ' ' << format_real(v);
    }
    if (f.jersey_present) {
      out << ' ' << (rec.jersey ? 1 : 0);
      if (rec.jersey) {
        for (float v : rec.jersey->c1) out << ' ' << format_real(v);
        for (float v : rec.jersey->c2) out << ' ' << format_real(v);
      }
    }
    for (float v : rec.appearance) out << ' ' << format_real(v);
    out << '\n';
  }
}

std::map<int, Homography> parse_homographies(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<int, Homography> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    auto cols = split(row, ',');
    if (cols.size() != 10)
      throw ParseError(path, line_no, "expected frame plus 9 matrix values");
    long long frame;
    if (!parse_int(trim(cols[0]), frame) || frame < 1)
      throw ParseError(path, line_no, "bad frame value");
    Homography h;
    for (int i = 0; i < 9; ++i) {
      if (!parse_real(trim(cols[1 + i]), h.m[i]))
        throw ParseError(path, line_no, "bad matrix value '" + std::string(cols[1 + i]) + "'");
    }
    if (std::abs(h.det()) <= 1e-12) throw ParseError(path, line_no, "singular homography");
    if (!out.emplace(static_cast<int>(frame - 1), h).second)
      throw ParseError(path, line_no, "duplicate frame " + std::to_string(frame));
  }
  return out;
}

void write_homographies(const std::map<int, Homography>& hs, const std::string& path) {
  std::ofstream out = open_output(path);
  for (const auto& [frame, h] : hs) {
    out << (frame + 1);
    for (double v : h.m) out << ',' << format_real(v);
    out << '\n';
  }
}

namespace {

const char* spatial_name(SpatialMode m) { return m == SpatialMode::Field ? "field" : "frame"; }

json mask_to_json(const FeatureMask& m) {
  return json{{"appearance", m.appearance}, {"jersey", m.jersey}, {"team", m.team},
              {"spatial", m.spatial},       {"iou", m.iou},       {"time", m.time}};
}

}  // namespace

EngineConfig load_config(const std::string& path) {
  std::ifstream in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad config file " + path + ": " + e.what());
  }
  EngineConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "levels") cfg.levels = value.get<int>();
    else if (key == "prune_k") cfg.prune_k = value.get<int>();
    else if (key == "spatial_mode") {
      std::string s = value.get<std::string>();
      if (s == "field") cfg.spatial_mode = SpatialMode::Field;
      else if (s == "frame") cfg.spatial_mode = SpatialMode::Frame;
      else throw std::runtime_error("config: spatial_mode must be 'field' or 'frame'");
    } else if (key == "team_cluster_n") cfg.team_cluster_n = value.get<int>();
    else if (key == "scorer") {
      std::string s = value.get<std::string>();
      if (s == "logistic") cfg.scorer = ScorerKind::Logistic;
      else if (s == "mpn") cfg.scorer = ScorerKind::MessagePassing;
      else throw std::runtime_error("config: scorer must be 'logistic' or 'mpn'");
    } else if (key == "rounding") {
      std::string s = value.get<std::string>();
      if (s == "greedy") cfg.rounding = RoundingKind::Greedy;
      else if (s == "exact") cfg.rounding = RoundingKind::Exact;
      else throw std::runtime_error("config: rounding must be 'greedy' or 'exact'");
    } else if (key == "window_overlap") cfg.window_overlap = value.get<double>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "edge_threshold") cfg.edge_threshold = value.get<double>();
    else if (key == "prune_lambda") cfg.prune_lambda = value.get<double>();
    else if (key == "exact_cap") cfg.exact_cap = value.get<int>();
    else if (key == "mpn_rounds") cfg.mpn_rounds = value.get<int>();
    else if (key == "hidden_dim") cfg.hidden_dim = value.get<int>();
    else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
    else if (key == "level_iters") cfg.level_iters = value.get<int>();
    else if (key == "joint_epochs") cfg.joint_epochs = value.get<int>();
    else if (key == "features") {
      const json& m = value;
      FeatureMask mask;
      mask.appearance = m.value("appearance", true);
      mask.jersey = m.value("jersey", true);
      mask.team = m.value("team", true);
      mask.spatial = m.value("spatial", true);
      mask.iou = m.value("iou", false);
      mask.time = m.value("time", true);
      cfg.features = mask;
    } else if (key == "image_width") cfg.image_width = value.get<int>();
    else if (key == "image_height") cfg.image_height = value.get<int>();
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
  if (cfg.levels < 1) throw std::runtime_error("config: levels must be >= 1");
  if (cfg.prune_k < 1) throw std::runtime_error("config: prune_k must be >= 1");
  if (cfg.team_cluster_n < 2) throw std::runtime_error("config: team_cluster_n must be >= 2");
  return cfg;
}

void save_config(const EngineConfig& cfg, const std::string& path) {
  json j{{"levels", cfg.levels},
         {"prune_k", cfg.prune_k},
         {"spatial_mode", spatial_name(cfg.spatial_mode)},
         {"team_cluster_n", cfg.team_cluster_n},
         {"scorer", cfg.scorer == ScorerKind::Logistic ? "logistic" : "mpn"},
         {"rounding", cfg.rounding == RoundingKind::Greedy ? "greedy" : "exact"},
         {"window_overlap", cfg.window_overlap},
         {"seed", cfg.seed},
         {"edge_threshold", cfg.edge_threshold},
         {"prune_lambda", cfg.prune_lambda},
         {"exact_cap", cfg.exact_cap},
         {"mpn_rounds", cfg.mpn_rounds},
         {"hidden_dim", cfg.hidden_dim},
         {"learning_rate", cfg.learning_rate},
         {"level_iters", cfg.level_iters},
         {"joint_epochs", cfg.joint_epochs},
         {"features", mask_to_json(cfg.features)},
         {"image_width", cfg.image_width},
         {"image_height", cfg.image_height}};
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

SequenceBundle load_sequence(const std::string& det_path, const std::string& features_path,
                             const std::optional<std::string>& homography_path,
                             const std::optional<std::string>& gt_path, const EngineConfig& cfg) {
  SequenceBundle b;
  b.config = cfg;
  MotData det = parse_mot(det_path);
  b.detections = std::move(det.detections);
  b.diagnostics = std::move(det.diagnostics);
  b.features = parse_features(features_path);
  if (homography_path) b.homographies = parse_homographies(*homography_path);
  if (gt_path) {
    MotData gt = parse_mot(*gt_path);
    if (!gt.has_ids) throw std::runtime_error("ground truth file has no identities: " + *gt_path);
    b.gt = std::move(gt.tracks);
  }

  for (const Detection& d : b.detections) {
    if (!b.features.records.count(d.det_id))
      throw std::runtime_error("detection " + std::to_string(d.det_id) +
                               " has no feature row in " + features_path);
  }
  for (const auto& [det_id, rec] : b.features.records) {
    if (det_id >= static_cast<int>(b.detections.size()))
      throw std::runtime_error("feature row references unknown det_id " + std::to_string(det_id));
  }
  if (cfg.spatial_mode == SpatialMode::Field && cfg.features.spatial && b.homographies.empty())
    throw std::runtime_error("field spatial mode requires a homography file");

  int max_frame = -1;
  for (const Detection& d : b.detections) max_frame = std::max(max_frame, d.frame);
  if (b.gt)
    for (const Track& t : b.gt->tracks)
      for (const TrackEntry& e : t.entries) max_frame = std::max(max_frame, e.frame);
  b.meta.frame_count = max_frame + 1;
  b.meta.width = cfg.image_width;
  b.meta.height = cfg.image_height;
  if (b.gt) b.gt->meta = b.meta;
  return b;
}

}  // namespace hgtrack
