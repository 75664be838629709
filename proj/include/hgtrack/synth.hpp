// Synthetic sports sequences with ground truth and feature sidecars, written
// in the exact ingest formats. Appearance features follow a per-identity
// drift model whose noise can be calibrated against target nearest-identity
// accuracies at configured frame gaps; occlusion episodes remove detections
// while motion continues.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgtrack/ingest.hpp"
#include "hgtrack/model.hpp"

namespace hgtrack {

struct OcclusionEpisode {
  int identity = 0;
  int start = 0;
  int duration = 0;
};

struct ScenarioSpec {
  std::string name = "scenario";
  int players_team_a = 7;
  int players_team_b = 7;
  int referees = 1;
  int length = 600;  // frames
  double fps = 25.0;
  int image_width = 1920;
  int image_height = 1080;
  double field_width = 105.0;  // meters (61 x 26 for hockey-style rinks)
  double field_height = 68.0;
  int appearance_dim = 32;

  double jersey_legible_prob = 0.5;
  double jersey_confidence = 0.9;  // peak character confidence when legible

  // Appearance model: identity direction = team_mix toward the team center;
  // per-frame drift is an Ornstein-Uhlenbeck walk around the identity base,
  // per-detection noise is isotropic.
  double team_mix = 0.7;
  double det_noise = 0.04;
  double drift_rate = 0.0;
  double drift_revert = 0.02;
  std::vector<int> gap_steps;       // e.g. {1, 50, 100, 300}
  std::vector<double> gap_targets;  // accuracies in [0,1]; non-empty => calibrate

  // Motion: piecewise-linear wander around a per-identity home point.
  double speed = 0.12;      // meters per frame
  double home_radius = 8.0;
  int shared_home_pairs = 0;  // same-team pairs sharing one home region

  // Camera sweep; corrupts frame coordinates and drives the homography file.
  double camera_pan_amp = 0.0;  // meters
  double camera_pan_period = 400.0;
  double camera_zoom_amp = 0.0;
  double homography_dropout = 0.0;  // fraction of frames without a row

  TeamBlock team_block = TeamBlock::Label;
  std::vector<OcclusionEpisode> occlusions;
};

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

struct GenerateResult {
  std::string det_path;
  std::string features_path;
  std::string homography_path;
  std::string gt_path;
  // Measured nearest-identity accuracy per gap step (fractions), present
  // when the spec carries gap steps.
  std::vector<std::pair<int, double>> gap_accuracy;
  double drift_rate_used = 0.0;
  double drift_revert_used = 0.0;
  double det_noise_used = 0.0;
};

/// Deterministic generation: identical (spec, seed) yields byte-identical
/// files. Throws std::invalid_argument on infeasible specs (occlusions out
/// of range, no identities).
GenerateResult generate(const ScenarioSpec& spec, std::uint64_t seed, const std::string& out_dir);

/// One ablation run: a scenario plus the tracker settings it is meant to be
/// tracked with.
struct AblationCase {
  std::string id;
  ScenarioSpec scenario;
  FeatureMask features;
  SpatialMode spatial_mode = SpatialMode::Field;
  int levels = 7;
};

/// The fixed scenario set behind the feature- and layer-ablation acceptance
/// runs: three feature configurations on a camera-motion scenario and three
/// layer counts on a long-occlusion scenario.
std::vector<AblationCase> ablation_suite(std::uint64_t seed);

}  // namespace hgtrack
