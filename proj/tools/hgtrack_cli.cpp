// Command-line surface: track / eval / synth / train / gap. Exit codes:
// 0 ok, 1 input or validation error, 2 internal invariant violation.
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgtrack/hierarchy.hpp"
#include "hgtrack/ingest.hpp"
#include "hgtrack/metrics.hpp"
#include "hgtrack/model.hpp"
#include "hgtrack/rounding.hpp"
#include "hgtrack/scorer.hpp"
#include "hgtrack/synth.hpp"
#include "hgtrack/text.hpp"

namespace {

using namespace hgtrack;

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<int> levels;
  std::optional<int> prune_k;
  std::optional<std::string> spatial_mode;
  std::optional<std::string> scorer;
  std::optional<std::string> rounding;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "engine config file (JSON)");
  cmd->add_option("--levels", f.levels, "hierarchy levels L");
  cmd->add_option("--k", f.prune_k, "K nearest candidates kept per node");
  cmd->add_option("--spatial-mode", f.spatial_mode, "field|frame")
      ->check(CLI::IsMember({"field", "frame"}));
  cmd->add_option("--scorer", f.scorer, "logistic|mpn")->check(CLI::IsMember({"logistic", "mpn"}));
  cmd->add_option("--rounding", f.rounding, "greedy|exact")
      ->check(CLI::IsMember({"greedy", "exact"}));
  cmd->add_option("--threshold", f.threshold, "edge acceptance threshold");
  cmd->add_option("--seed", f.seed, "random seed");
}

EngineConfig resolve_config(const CommonFlags& f) {
  EngineConfig cfg;
  if (f.config_path) cfg = load_config(*f.config_path);
  if (f.levels) cfg.levels = *f.levels;
  if (f.prune_k) cfg.prune_k = *f.prune_k;
  if (f.spatial_mode) cfg.spatial_mode = *f.spatial_mode == "field" ? SpatialMode::Field : SpatialMode::Frame;
  if (f.scorer) cfg.scorer = *f.scorer == "logistic" ? ScorerKind::Logistic : ScorerKind::MessagePassing;
  if (f.rounding) cfg.rounding = *f.rounding == "greedy" ? RoundingKind::Greedy : RoundingKind::Exact;
  if (f.threshold) cfg.edge_threshold = *f.threshold;
  if (f.seed) cfg.seed = *f.seed;
  if (cfg.levels < 1) throw std::runtime_error("levels must be >= 1");
  if (cfg.prune_k < 1) throw std::runtime_error("k must be >= 1");
  return cfg;
}

int cmd_track(const std::string& det, const std::string& features,
              const std::optional<std::string>& homography, const std::string& weights_path,
              const std::string& out_path, const CommonFlags& flags,
              const std::optional<std::string>& debug_dir, int threads) {
  EngineConfig cfg = resolve_config(flags);
  ScorerWeights weights = load_weights(weights_path);

  // The weights define the edge feature layout; the engine adopts it. An
  // explicit --spatial-mode must agree.
  FeatureMask mask;
  SpatialMode mode;
  parse_feature_layout_tag(weights.feature_layout, mask, mode);
  if (flags.spatial_mode && cfg.spatial_mode != mode)
    throw std::runtime_error("--spatial-mode disagrees with the weights feature layout '" +
                             weights.feature_layout + "'");
  cfg.features = mask;
  cfg.spatial_mode = mode;
  if (!flags.levels && !flags.config_path) cfg.levels = weights.levels;
  if (cfg.levels > weights.levels)
    throw std::runtime_error("config asks for " + std::to_string(cfg.levels) +
                             " levels but the weights provide " + std::to_string(weights.levels));
  cfg.scorer = weights.kind;

  SequenceBundle bundle = load_sequence(det, features, homography, std::nullopt, cfg);
  for (const std::string& d : bundle.diagnostics) std::cerr << "note: " << d << '\n';
  FeatureStore store = build_feature_store(bundle);
  for (const std::string& d : store.diagnostics) std::cerr << "note: " << d << '\n';

  HierarchyOptions opts;
  opts.debug_dir = debug_dir;
  opts.threads = threads;
  TrackSet result = run_hierarchy(store, weights, cfg, bundle.meta, opts);

  std::vector<std::string> violations = validate_trackset(result);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "invariant violation: " << v << '\n';
    return 2;
  }
  write_mot(result, out_path);

  size_t total_len = 0;
  for (const Track& t : result.tracks) total_len += t.entries.size();
  double mean_len = result.tracks.empty() ? 0.0 : static_cast<double>(total_len) / result.tracks.size();
  std::cout << "tracks " << result.tracks.size() << "\nmean_length " << format_real(mean_len)
            << "\nout " << out_path << '\n';
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path, bool key_values) {
  MotData pred = parse_mot(pred_path);
  MotData gt = parse_mot(gt_path);
  if (!pred.has_ids) throw std::runtime_error("prediction file has no identities: " + pred_path);
  if (!gt.has_ids) throw std::runtime_error("ground truth file has no identities: " + gt_path);
  MetricReport report = evaluate(pred.tracks, gt.tracks);
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << (key_values ? report_key_values(report) : format_report(report));
  return 0;
}

int cmd_synth(const std::optional<std::string>& scenario_path,
              const std::optional<std::string>& case_id, std::uint64_t seed,
              const std::string& out_dir, const std::optional<std::string>& save_scenario_path) {
  ScenarioSpec spec;
  if (scenario_path) {
    spec = load_scenario(*scenario_path);
  } else if (case_id) {
    bool found = false;
    for (const AblationCase& c : ablation_suite(seed)) {
      if (c.id == *case_id) {
        spec = c.scenario;
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("unknown ablation case '" + *case_id + "'");
  } else {
    // Small demonstration scenario.
    spec.name = "demo";
    spec.players_team_a = 5;
    spec.players_team_b = 5;
    spec.referees = 1;
    spec.length = 400;
    spec.occlusions = {{0, 120, 90}, {3, 200, 60}};
    spec.gap_steps = {1, 50, 100};
  }
  if (save_scenario_path) save_scenario(spec, *save_scenario_path);
  GenerateResult res = generate(spec, seed, out_dir);
  std::cout << "det " << res.det_path << "\ngt " << res.gt_path << "\nfeatures "
            << res.features_path << "\nhomography " << res.homography_path << '\n';
  for (auto& [gap, acc] : res.gap_accuracy)
    std::cout << "gap " << gap << " accuracy " << format_real(100.0 * acc) << '\n';
  return 0;
}

int cmd_train(const std::string& mot_path, const std::string& features,
              const std::optional<std::string>& homography, const std::string& out_path,
              const CommonFlags& flags, const std::optional<std::string>& log_path,
              std::optional<int> iters, std::optional<int> epochs, std::optional<double> lr,
              std::optional<int> hidden, std::optional<int> rounds) {
  EngineConfig cfg = resolve_config(flags);
  if (iters) cfg.level_iters = *iters;
  if (epochs) cfg.joint_epochs = *epochs;
  if (lr) cfg.learning_rate = *lr;
  if (hidden) cfg.hidden_dim = *hidden;
  if (rounds) cfg.mpn_rounds = *rounds;

  SequenceBundle bundle = load_sequence(mot_path, features, homography, mot_path, cfg);
  FeatureStore store = build_feature_store(bundle);
  std::vector<LabeledGraph> graphs = build_training_graphs(store, *bundle.gt, cfg, bundle.meta);

  std::string layout = feature_layout_tag(cfg.features, cfg.spatial_mode);
  ScorerWeights init =
      init_scorer_weights(cfg.scorer, cfg.levels, edge_feature_dim(cfg.features, cfg.spatial_mode),
                          cfg.hidden_dim, cfg.mpn_rounds, layout, cfg.seed);

  TrainOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.level_iters = cfg.level_iters;
  opts.joint_epochs = cfg.joint_epochs;
  opts.seed = cfg.seed;
  std::ofstream log;
  if (log_path) {
    log.open(*log_path);
    if (!log) throw std::runtime_error("cannot open log file: " + *log_path);
    opts.log = &log;
  }
  TrainResult result = train_scorer(graphs, std::move(init), opts);
  save_weights(result.weights, out_path);

  size_t edges = 0, positives = 0;
  for (const LabeledGraph& g : graphs) {
    edges += g.labels.size();
    for (auto l : g.labels) positives += l;
  }
  std::cout << "graphs " << graphs.size() << "\nedges " << edges << "\npositives " << positives
            << "\nfinal_loss " << format_real(result.final_loss) << "\nsteps " << result.steps
            << "\nout " << out_path << '\n';
  return 0;
}

int cmd_gap(const std::string& gt_path, const std::string& features,
            const std::optional<std::string>& homography, const std::string& steps_csv,
            const CommonFlags& flags) {
  CommonFlags adjusted = flags;
  if (!adjusted.spatial_mode) adjusted.spatial_mode = homography ? "field" : "frame";
  EngineConfig cfg = resolve_config(adjusted);
  SequenceBundle bundle = load_sequence(gt_path, features, homography, gt_path, cfg);
  FeatureStore store = build_feature_store(bundle);

  std::vector<int> gaps;
  for (std::string_view part : split(steps_csv, ',')) {
    long long v;
    if (!parse_int(trim(part), v) || v < 0)
      throw std::runtime_error("bad gap step '" + std::string(part) + "'");
    gaps.push_back(static_cast<int>(v));
  }
  std::vector<GapAccuracy> acc = reid_gap_analysis(store, *bundle.gt, gaps);
  std::cout << "gap accuracy pairs skipped\n";
  for (const GapAccuracy& a : acc)
    std::cout << a.gap << ' ' << format_real(100.0 * a.accuracy) << ' ' << a.pairs << ' '
              << a.skipped << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical graph tracker for team sports"};
  app.require_subcommand(1);

  // track
  auto* track = app.add_subcommand("track", "run the tracker on a sequence");
  std::string t_det, t_features, t_weights, t_out;
  std::optional<std::string> t_hom, t_debug;
  int t_threads = 1;
  CommonFlags t_flags;
  track->add_option("--det", t_det, "detections (MOT CSV)")->required();
  track->add_option("--features", t_features, "feature sidecar")->required();
  track->add_option("--homography", t_hom, "homography CSV");
  track->add_option("--weights", t_weights, "scorer weights")->required();
  track->add_option("--out", t_out, "output track file")->required();
  track->add_option("--debug-graphs", t_debug, "directory for per-level edge dumps");
  track->add_option("--threads", t_threads, "window worker cap");
  add_common(track, t_flags);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "HOTA metrics between two MOT files");
  std::string e_pred, e_gt;
  bool e_kv = false;
  eval_cmd->add_option("pred", e_pred, "predicted tracks")->required();
  eval_cmd->add_option("gt", e_gt, "ground truth tracks")->required();
  eval_cmd->add_flag("--kv", e_kv, "machine-readable key-value output");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic sequence");
  std::optional<std::string> s_scenario, s_case, s_save;
  std::string s_out;
  std::uint64_t s_seed = 0;
  synth->add_option("--scenario", s_scenario, "scenario spec (JSON)");
  synth->add_option("--case", s_case, "ablation suite case id");
  synth->add_option("--out-dir", s_out, "output directory")->required();
  synth->add_option("--seed", s_seed, "random seed");
  synth->add_option("--save-scenario", s_save, "write the scenario spec used");

  // train
  auto* train = app.add_subcommand("train", "train a scorer on an identified sequence");
  std::string tr_mot, tr_features, tr_out;
  std::optional<std::string> tr_hom, tr_log;
  std::optional<int> tr_iters, tr_epochs, tr_hidden, tr_rounds;
  std::optional<double> tr_lr;
  CommonFlags tr_flags;
  train->add_option("--mot", tr_mot, "identified MOT file (detections + labels)")->required();
  train->add_option("--features", tr_features, "feature sidecar")->required();
  train->add_option("--homography", tr_hom, "homography CSV");
  train->add_option("--out", tr_out, "output weights file")->required();
  train->add_option("--log", tr_log, "training log file");
  train->add_option("--iters", tr_iters, "per-level warmup iterations");
  train->add_option("--epochs", tr_epochs, "joint training epochs");
  train->add_option("--lr", tr_lr, "learning rate");
  train->add_option("--hidden", tr_hidden, "hidden dimension");
  train->add_option("--rounds", tr_rounds, "message passing rounds");
  add_common(train, tr_flags);

  // gap
  auto* gap = app.add_subcommand("gap", "re-identification accuracy at frame gaps");
  std::string g_gt, g_features, g_steps = "1,50,100,300";
  std::optional<std::string> g_hom;
  CommonFlags g_flags;
  gap->add_option("--gt", g_gt, "identified MOT file")->required();
  gap->add_option("--features", g_features, "feature sidecar")->required();
  gap->add_option("--homography", g_hom, "homography CSV");
  gap->add_option("--steps", g_steps, "comma-separated frame gaps");
  add_common(gap, g_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed())
      return cmd_track(t_det, t_features, t_hom, t_weights, t_out, t_flags, t_debug, t_threads);
    if (eval_cmd->parsed()) return cmd_eval(e_pred, e_gt, e_kv);
    if (synth->parsed()) return cmd_synth(s_scenario, s_case, s_seed, s_out, s_save);
    if (train->parsed())
      return cmd_train(tr_mot, tr_features, tr_hom, tr_out, tr_flags, tr_log, tr_iters, tr_epochs,
                       tr_lr, tr_hidden, tr_rounds);
    if (gap->parsed()) return cmd_gap(g_gt, g_features, g_hom, g_steps, g_flags);
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
