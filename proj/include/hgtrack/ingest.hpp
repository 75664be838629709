// Parsing and validation of all on-disk inputs: MOT detection/ground-truth
// files, the feature sidecar, homography files and the engine config. On-disk
// MOT frames and ids are 1-based; everything internal is 0-based. Conversion
// happens only here.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgtrack/model.hpp"

namespace hgtrack {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}
  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

/// Row-major 3x3 projective matrix.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double det() const;
  Homography inverse() const;  // throws std::domain_error when singular
};

struct MotData {
  // Every row, in file order; det_id is the 0-based row index.
  std::vector<Detection> detections;
  // Rows whose id column is >= 1 on disk, grouped into tracks (0-based ids).
  TrackSet tracks;
  bool has_ids = false;
  std::vector<std::string> diagnostics;
};

/// Parse a MOT CSV file: `frame,id,x,y,w,h,conf,...`, extra columns ignored.
/// Throws ParseError on malformed rows, negative extents, or I/O failure.
MotData parse_mot(const std::string& path);

/// Write tracks as MOT CSV, rows ordered by (frame, track id), 1-based on disk.
void write_mot(const TrackSet& ts, const std::string& path);

enum class TeamBlock { Label, Embedding };

struct RawFeatureRecord {
  int det_id = -1;
  std::vector<float> appearance;
  std::optional<CharConfidences> jersey;  // absent => illegible
  int team_label = -1;                    // label mode: 0 A, 1 B, 2 referee
  bool referee = false;                   // embedding mode referee flag
  std::vector<float> team_embedding;      // embedding mode
};

struct FeatureFile {
  int appearance_dim = 0;
  TeamBlock team_block = TeamBlock::Label;
  int team_dim = 0;  // embedding mode only
  bool jersey_present = true;
  std::optional<SpatialMode> spatial_hint;
  std::map<int, RawFeatureRecord> records;
};

/// Parse the self-describing feature sidecar. Throws ParseError on schema or
/// dimension mismatch and on duplicate det_id.
FeatureFile parse_features(const std::string& path);
void write_features(const FeatureFile& f, const std::string& path);

/// Parse `frame,h00..h22` rows; frames may be sparse. Throws on duplicate
/// frames and singular matrices (|det| <= 1e-12). Frames 1-based on disk.
std::map<int, Homography> parse_homographies(const std::string& path);
void write_homographies(const std::map<int, Homography>& hs, const std::string& path);

EngineConfig load_config(const std::string& path);
void save_config(const EngineConfig& cfg, const std::string& path);

/// Everything one sequence needs, parsed but not yet feature-assembled.
struct SequenceBundle {
  std::vector<Detection> detections;
  FeatureFile features;
  std::map<int, Homography> homographies;  // keyed by 0-based frame
  std::optional<TrackSet> gt;
  EngineConfig config;
  SequenceMeta meta;
  std::vector<std::string> diagnostics;
};

/// Load and cross-validate a sequence: every detection must have a feature
/// row, no feature row may reference an unknown det_id, and field mode
/// requires at least one homography.
SequenceBundle load_sequence(const std::string& det_path, const std::string& features_path,
                             const std::optional<std::string>& homography_path,
                             const std::optional<std::string>& gt_path, const EngineConfig& cfg);

}  // namespace hgtrack
