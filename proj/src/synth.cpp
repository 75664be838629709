#include "hgtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hgtrack/rng.hpp"
#include "hgtrack/text.hpp"

namespace hgtrack {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> gaussian_vec(Rng& rng, int dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return v;
}

void normalize(std::vector<double>& v) {
  double n = 0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n > 0)
    for (double& x : v) x /= n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Unit vector at a fixed cosine from base.
std::vector<double> at_cosine(const std::vector<double>& base, double c, Rng& rng) {
  std::vector<double> g = gaussian_vec(rng, static_cast<int>(base.size()));
  double proj = dot(g, base);
  for (size_t i = 0; i < g.size(); ++i) g[i] -= proj * base[i];
  normalize(g);
  std::vector<double> out(base.size());
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  for (size_t i = 0; i < out.size(); ++i) out[i] = c * base[i] + s * g[i];
  return out;
}

struct Identity {
  int team;  // 0 A, 1 B, 2 referee
  int jersey_number;  // -1 for referees
  double home_x, home_y;
};

}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad scenario file " + path + ": " + e.what());
  }
  ScenarioSpec s;
  s.name = j.value("name", s.name);
  s.players_team_a = j.value("players_team_a", s.players_team_a);
  s.players_team_b = j.value("players_team_b", s.players_team_b);
  s.referees = j.value("referees", s.referees);
  s.length = j.value("length", s.length);
  s.fps = j.value("fps", s.fps);
  s.image_width = j.value("image_width", s.image_width);
  s.image_height = j.value("image_height", s.image_height);
  s.field_width = j.value("field_width", s.field_width);
  s.field_height = j.value("field_height", s.field_height);
  s.appearance_dim = j.value("appearance_dim", s.appearance_dim);
  s.jersey_legible_prob = j.value("jersey_legible_prob", s.jersey_legible_prob);
  s.jersey_confidence = j.value("jersey_confidence", s.jersey_confidence);
  s.team_mix = j.value("team_mix", s.team_mix);
  s.det_noise = j.value("det_noise", s.det_noise);
  s.drift_rate = j.value("drift_rate", s.drift_rate);
  s.drift_revert = j.value("drift_revert", s.drift_revert);
  s.gap_steps = j.value("gap_steps", s.gap_steps);
  s.gap_targets = j.value("gap_targets", s.gap_targets);
  s.speed = j.value("speed", s.speed);
  s.home_radius = j.value("home_radius", s.home_radius);
  s.shared_home_pairs = j.value("shared_home_pairs", s.shared_home_pairs);
  s.camera_pan_amp = j.value("camera_pan_amp", s.camera_pan_amp);
  s.camera_pan_period = j.value("camera_pan_period", s.camera_pan_period);
  s.camera_zoom_amp = j.value("camera_zoom_amp", s.camera_zoom_amp);
  s.homography_dropout = j.value("homography_dropout", s.homography_dropout);
  if (j.contains("team_block"))
    s.team_block = j.at("team_block").get<std::string>() == "embedding" ? TeamBlock::Embedding
                                                                        : TeamBlock::Label;
  if (j.contains("occlusions")) {
    for (const json& o : j.at("occlusions"))
      s.occlusions.push_back({o.at("identity").get<int>(), o.at("start").get<int>(),
                              o.at("duration").get<int>()});
  }
  return s;
}

void save_scenario(const ScenarioSpec& s, const std::string& path) {
  json occ = json::array();
  for (const OcclusionEpisode& o : s.occlusions)
    occ.push_back({{"identity", o.identity}, {"start", o.start}, {"duration", o.duration}});
  json j{{"name", s.name},
         {"players_team_a", s.players_team_a},
         {"players_team_b", s.players_team_b},
         {"referees", s.referees},
         {"length", s.length},
         {"fps", s.fps},
         {"image_width", s.image_width},
         {"image_height", s.image_height},
         {"field_width", s.field_width},
         {"field_height", s.field_height},
         {"appearance_dim", s.appearance_dim},
         {"jersey_legible_prob", s.jersey_legible_prob},
         {"jersey_confidence", s.jersey_confidence},
         {"team_mix", s.team_mix},
         {"det_noise", s.det_noise},
         {"drift_rate", s.drift_rate},
         {"drift_revert", s.drift_revert},
         {"gap_steps", s.gap_steps},
         {"gap_targets", s.gap_targets},
         {"speed", s.speed},
         {"home_radius", s.home_radius},
         {"shared_home_pairs", s.shared_home_pairs},
         {"camera_pan_amp", s.camera_pan_amp},
         {"camera_pan_period", s.camera_pan_period},
         {"camera_zoom_amp", s.camera_zoom_amp},
         {"homography_dropout", s.homography_dropout},
         {"team_block", s.team_block == TeamBlock::Embedding ? "embedding" : "label"},
         {"occlusions", occ}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump(2) << '\n';
}

namespace {

using FeatureTable = std::vector<std::vector<std::vector<float>>>;  // [id][frame][dim]

// Appearance stream for one parameter set: an OU walk around the identity
// base plus per-detection noise, consuming pre-drawn gaussian tables so the
// calibration search responds smoothly to parameters.
FeatureTable build_features(const std::vector<std::vector<double>>& base,
                            const std::vector<double>& drift_scale, int length, int dim,
                            const std::vector<float>& eta, const std::vector<float>& eps,
                            double drift, double revert, double sigma) {
  const int ids = static_cast<int>(base.size());
  FeatureTable out(ids, std::vector<std::vector<float>>(length, std::vector<float>(dim)));
  std::vector<double> walk(dim), f(dim);
  for (int id = 0; id < ids; ++id) {
    walk = base[id];
    const double id_drift = drift * drift_scale[id];
    const size_t id_off = static_cast<size_t>(id) * length * dim;
    for (int t = 0; t < length; ++t) {
      const float* eta_t = eta.data() + id_off + static_cast<size_t>(t) * dim;
      const float* eps_t = eps.data() + id_off + static_cast<size_t>(t) * dim;
      for (int k = 0; k < dim; ++k) {
        walk[k] = base[id][k] + (1.0 - revert) * (walk[k] - base[id][k]) + id_drift * eta_t[k];
      }
      normalize(walk);
      for (int k = 0; k < dim; ++k) f[k] = walk[k] + sigma * eps_t[k];
      normalize(f);
      for (int k = 0; k < dim; ++k) out[id][t][k] = static_cast<float>(f[k]);
    }
  }
  return out;
}

// Nearest-identity accuracy per gap; candidate order is identity-ascending,
// which matches det_id order in the emitted files.
std::vector<double> measure_gaps(const FeatureTable& features,
                                 const std::vector<std::vector<char>>& visible,
                                 const std::vector<int>& gaps, int frame_step) {
  const int ids = static_cast<int>(features.size());
  const int length = ids > 0 ? static_cast<int>(features[0].size()) : 0;
  std::vector<double> out;
  for (int gap : gaps) {
    long long pairs = 0, correct = 0;
    for (int i = 0; i + gap < length; i += frame_step) {
      for (int a = 0; a < ids; ++a) {
        if (!visible[a][i] || !visible[a][i + gap]) continue;
        const std::vector<float>& q = features[a][i];
        double best = -2.0;
        int best_id = -1;
        for (int c = 0; c < ids; ++c) {
          if (!visible[c][i + gap]) continue;
          const std::vector<float>& f = features[c][i + gap];
          double dotp = 0, nq = 0, nf = 0;
          for (size_t k = 0; k < q.size(); ++k) {
            dotp += static_cast<double>(q[k]) * f[k];
            nq += static_cast<double>(q[k]) * q[k];
            nf += static_cast<double>(f[k]) * f[k];
          }
          double sim = (nq > 0 && nf > 0) ? dotp / (std::sqrt(nq) * std::sqrt(nf)) : 0.0;
          if (sim > best) {
            best = sim;
            best_id = c;
          }
        }
        ++pairs;
        if (best_id == a) ++correct;
      }
    }
    out.push_back(pairs > 0 ? static_cast<double>(correct) / pairs : 0.0);
  }
  return out;
}

struct Camera {
  double cx, cy, k;
};

}  // namespace

GenerateResult generate(const ScenarioSpec& spec, std::uint64_t seed, const std::string& out_dir) {
  const int players = spec.players_team_a + spec.players_team_b;
  const int ids = players + spec.referees;
  if (ids < 1) throw std::invalid_argument("generate: scenario has no identities");
  if (spec.length < 1) throw std::invalid_argument("generate: scenario length must be >= 1");
  if (spec.appearance_dim < 2) throw std::invalid_argument("generate: appearance_dim must be >= 2");
  for (const OcclusionEpisode& o : spec.occlusions) {
    if (o.identity < 0 || o.identity >= ids)
      throw std::invalid_argument("generate: occlusion references unknown identity " +
                                  std::to_string(o.identity));
    if (o.start < 0 || o.duration < 1 || o.start + o.duration > spec.length)
      throw std::invalid_argument("generate: occlusion beyond sequence length");
  }

  // Identity setup: teams, jersey numbers, home points on a staggered grid.
  Rng setup(mix_seed(seed, 1));
  std::vector<Identity> identity(ids);
  for (int i = 0; i < ids; ++i) {
    Identity& d = identity[i];
    if (i < spec.players_team_a) {
      d.team = 0;
      d.jersey_number = 10 + 2 * i;
    } else if (i < players) {
      d.team = 1;
      d.jersey_number = 11 + 2 * (i - spec.players_team_a);
    } else {
      d.team = 2;
      d.jersey_number = -1;
    }
  }
  {
    const double margin_x = spec.field_width * 0.12;
    const double margin_y = spec.field_height * 0.15;
    int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ids))));
    int rows = (ids + cols - 1) / cols;
    for (int i = 0; i < ids; ++i) {
      int r = i / cols, c = i % cols;
      double fx = cols > 1 ? static_cast<double>(c) / (cols - 1) : 0.5;
      double fy = rows > 1 ? static_cast<double>(r) / (rows - 1) : 0.5;
      identity[i].home_x = margin_x + fx * (spec.field_width - 2 * margin_x) +
                           setup.uniform(-1.5, 1.5);
      identity[i].home_y = margin_y + fy * (spec.field_height - 2 * margin_y) +
                           setup.uniform(-1.5, 1.5);
    }
    // Pairs that share a home region force positional ambiguity; alternate
    // between the two teams.
    for (int k = 0; k < spec.shared_home_pairs; ++k) {
      int team_base = (k % 2 == 0) ? 0 : spec.players_team_a;
      int a = team_base + 2 * (k / 2);
      int b = a + 1;
      if (b < players && identity[a].team == identity[b].team) {
        identity[b].home_x = identity[a].home_x;
        identity[b].home_y = identity[a].home_y;
      }
    }
  }

  // Visibility.
  std::vector<std::vector<char>> visible(ids, std::vector<char>(spec.length, 1));
  for (const OcclusionEpisode& o : spec.occlusions)
    for (int t = o.start; t < o.start + o.duration; ++t) visible[o.identity][t] = 0;

  // Motion: piecewise-linear wander toward random targets around home.
  Rng motion(mix_seed(seed, 2));
  std::vector<std::vector<std::pair<double, double>>> pos(
      ids, std::vector<std::pair<double, double>>(spec.length));
  for (int i = 0; i < ids; ++i) {
    double x = identity[i].home_x + motion.uniform(-1.0, 1.0);
    double y = identity[i].home_y + motion.uniform(-1.0, 1.0);
    double tx = x, ty = y;
    for (int t = 0; t < spec.length; ++t) {
      double dx = tx - x, dy = ty - y;
      double dist = std::sqrt(dx * dx + dy * dy);
      while (dist < spec.speed) {
        double ang = motion.uniform(0.0, 2.0 * kPi);
        double rad = spec.home_radius * std::sqrt(motion.uniform());
        tx = identity[i].home_x + rad * std::cos(ang);
        ty = identity[i].home_y + rad * std::sin(ang);
        dx = tx - x;
        dy = ty - y;
        dist = std::sqrt(dx * dx + dy * dy);
      }
      x += spec.speed * dx / dist;
      y += spec.speed * dy / dist;
      pos[i][t] = {x, y};
    }
  }

  // Camera sweep and the frame-to-field homography per frame.
  const double k_base = 0.9 * spec.image_height / spec.field_height;
  std::vector<Camera> camera(spec.length);
  for (int t = 0; t < spec.length; ++t) {
    double phase = 2.0 * kPi * t / spec.camera_pan_period;
    camera[t].cx = spec.field_width / 2 + spec.camera_pan_amp * std::sin(phase);
    camera[t].cy = spec.field_height / 2 +
                   0.3 * spec.camera_pan_amp * std::sin(phase * 0.6 + 0.9);
    camera[t].k = k_base * (1.0 + spec.camera_zoom_amp * std::sin(phase * 1.3 + 2.1));
  }

  // Appearance bases: team centers at fixed cosine, identities mixed toward
  // their team center.
  Rng app_setup(mix_seed(seed, 3));
  const int dim = spec.appearance_dim;
  std::vector<double> team_a = gaussian_vec(app_setup, dim);
  normalize(team_a);
  std::vector<double> team_b = at_cosine(team_a, 0.2, app_setup);
  std::vector<double> team_r = at_cosine(team_a, 0.1, app_setup);
  std::vector<std::vector<double>> base(ids);
  for (int i = 0; i < ids; ++i) {
    const std::vector<double>& center =
        identity[i].team == 0 ? team_a : (identity[i].team == 1 ? team_b : team_r);
    base[i] = at_cosine(center, spec.team_mix, app_setup);
  }

  // Pre-drawn gaussian tables shared by every calibration attempt, plus a
  // per-identity drift spread (some appearances age faster than others),
  // which smooths the population accuracy decay.
  Rng app_noise(mix_seed(seed, 4));
  const size_t table = static_cast<size_t>(ids) * spec.length * dim;
  std::vector<float> eta(table), eps(table);
  for (float& v : eta) v = static_cast<float>(app_noise.normal());
  for (float& v : eps) v = static_cast<float>(app_noise.normal());
  std::vector<double> drift_scale(ids);
  for (double& v : drift_scale) v = std::exp(app_noise.uniform(-1.0, 1.0));

  double drift = spec.drift_rate, revert = spec.drift_revert, sigma = spec.det_noise;
  const bool calibrate = !spec.gap_targets.empty() && !spec.gap_steps.empty();
  if (calibrate && spec.gap_targets.size() != spec.gap_steps.size())
    throw std::invalid_argument("generate: gap_targets and gap_steps sizes differ");
  FeatureTable features;
  if (calibrate) {
    struct Attempt {
      double rank;  // deviation, heavily penalized when non-monotone
      double dev;
      double drift, revert, sigma;
    };
    std::vector<Attempt> attempts;
    auto try_params = [&](double dr, double rv, double sg) {
      FeatureTable f = build_features(base, drift_scale, spec.length, dim, eta, eps, dr, rv, sg);
      std::vector<double> acc = measure_gaps(f, visible, spec.gap_steps, 2);
      double dev = 0;
      bool monotone = true;
      for (size_t g = 0; g < acc.size(); ++g) {
        dev = std::max(dev, std::abs(acc[g] - spec.gap_targets[g]) * 100.0);
        if (g > 0 && acc[g] > acc[g - 1] + 1e-12) monotone = false;
      }
      attempts.push_back({monotone ? dev : dev + 100.0, dev, dr, rv, sg});
    };
    auto by_rank = [](const Attempt& a, const Attempt& b) { return a.rank < b.rank; };
    // Coarse sweep, then local refinement around the best coarse points
    // (the nearest-identity accuracy floor is steep in the drift rate).
    const std::vector<double> sigmas = {0.75 * spec.det_noise, spec.det_noise,
                                        1.5 * spec.det_noise};
    const std::vector<double> reverts = {0.002, 0.005, 0.012, 0.02, 0.035, 0.08};
    std::vector<double> drifts;
    for (double d = 0.003; d < 0.3; d *= 1.7) drifts.push_back(d);
    for (double sg : sigmas)
      for (double dr : drifts)
        for (double rv : reverts) try_params(dr, rv, sg);
    std::stable_sort(attempts.begin(), attempts.end(), by_rank);
    std::vector<Attempt> seeds_to_refine(attempts.begin(),
                                         attempts.begin() + std::min<size_t>(3, attempts.size()));
    for (const Attempt& c : seeds_to_refine)
      for (double fd : {0.55, 0.68, 0.8, 0.9, 1.1, 1.25, 1.45})
        for (double fr : {0.5, 0.7, 1.0, 1.4, 2.0}) try_params(c.drift * fd, c.revert * fr, c.sigma);
    std::stable_sort(attempts.begin(), attempts.end(), by_rank);
    // Verify the best few against the full-stride measurement (the one the
    // gap analysis will reproduce) and prefer a monotone in-band result.
    bool chosen = false;
    for (double accept : {4.0, 4.9}) {
      for (size_t i = 0; i < attempts.size() && i < 12 && !chosen; ++i) {
        FeatureTable f =
            build_features(base, drift_scale, spec.length, dim, eta, eps, attempts[i].drift,
                           attempts[i].revert, attempts[i].sigma);
        std::vector<double> acc = measure_gaps(f, visible, spec.gap_steps, 1);
        double dev = 0;
        bool monotone = true;
        for (size_t g = 0; g < acc.size(); ++g) {
          dev = std::max(dev, std::abs(acc[g] - spec.gap_targets[g]) * 100.0);
          if (g > 0 && acc[g] > acc[g - 1]) monotone = false;
        }
        if (monotone && dev <= accept) {
          drift = attempts[i].drift;
          revert = attempts[i].revert;
          sigma = attempts[i].sigma;
          features = std::move(f);
          chosen = true;
        }
      }
      if (chosen) break;
    }
    if (!chosen) {
      drift = attempts[0].drift;
      revert = attempts[0].revert;
      sigma = attempts[0].sigma;
    }
  }
  if (features.empty())
    features = build_features(base, drift_scale, spec.length, dim, eta, eps, drift, revert, sigma);

  // Team embeddings (embedding mode only).
  Rng team_rng(mix_seed(seed, 5));
  const int team_dim = 8;
  std::vector<double> team_center_a = gaussian_vec(team_rng, team_dim);
  normalize(team_center_a);
  for (double& v : team_center_a) v *= 2.0;
  std::vector<double> team_center_b(team_dim);
  for (int k = 0; k < team_dim; ++k) team_center_b[k] = -team_center_a[k];

  Rng jersey_rng(mix_seed(seed, 6));
  Rng drop_rng(mix_seed(seed, 7));

  std::filesystem::create_directories(out_dir);
  GenerateResult res;
  res.det_path = out_dir + "/det.txt";
  res.gt_path = out_dir + "/gt.txt";
  res.features_path = out_dir + "/features.tsv";
  res.homography_path = out_dir + "/homography.csv";
  res.drift_rate_used = drift;
  res.drift_revert_used = revert;
  res.det_noise_used = sigma;

  std::ofstream det(res.det_path), gt(res.gt_path), feat(res.features_path),
      hom(res.homography_path);
  if (!det || !gt || !feat || !hom)
    throw std::runtime_error("generate: cannot open output files in " + out_dir);

  feat << "#hgtrack-features v1\n#appearance_dim " << dim << '\n';
  if (spec.team_block == TeamBlock::Label) feat << "#team label\n";
  else feat << "#team embedding " << team_dim << '\n';
  feat << "#jersey chars\n";

  auto peaked = [&](int peak_index) {
    std::array<double, kCharDim> c{};
    double p = spec.jersey_confidence - 0.08 * jersey_rng.uniform();
    for (int i = 0; i < kCharDim; ++i) c[i] = (1.0 - p) / (kCharDim - 1);
    c[peak_index] = p;
    return c;
  };

  int det_id = 0;
  for (int t = 0; t < spec.length; ++t) {
    for (int i = 0; i < ids; ++i) {
      if (!visible[i][t]) continue;
      const Camera& cam = camera[t];
      auto [xm, ym] = pos[i][t];
      double px = (xm - cam.cx) * cam.k + spec.image_width / 2.0;
      double py = (ym - cam.cy) * cam.k + spec.image_height / 2.0;
      float w = static_cast<float>(0.7 * cam.k);
      float h = static_cast<float>(1.8 * cam.k);
      float x = static_cast<float>(px) - w / 2.f;
      float y = static_cast<float>(py) - h / 2.f;

      std::string box = format_real(x) + "," + format_real(y) + "," + format_real(w) + "," +
                        format_real(h);
      det << (t + 1) << ",-1," << box << ",1,-1,-1,-1\n";
      gt << (t + 1) << ',' << (i + 1) << ',' << box << ",1,-1,-1,-1\n";

      feat << det_id;
      if (spec.team_block == TeamBlock::Label) {
        feat << ' ' << identity[i].team;
      } else {
        feat << ' ' << (identity[i].team == 2 ? 1 : 0);
        for (int k = 0; k < team_dim; ++k) {
          double v = identity[i].team == 2
                         ? 0.0
                         : (identity[i].team == 0 ? team_center_a[k] : team_center_b[k]) +
                               0.3 * team_rng.normal();
          feat << ' ' << format_real(static_cast<float>(v));
        }
      }
      // Jersey block: players always carry character confidences (EOL-peaked
      // when illegible); referees carry none.
      if (identity[i].team == 2) {
        feat << " 0";
      } else {
        bool legible = jersey_rng.uniform() < spec.jersey_legible_prob;
        int num = identity[i].jersey_number;
        std::array<double, kCharDim> c1{}, c2{};
        if (!legible) {
          c1 = peaked(0);
          c2 = peaked(0);
        } else if (num < 10) {
          c1 = peaked(1 + num);
          c2 = peaked(0);
        } else {
          c1 = peaked(1 + num / 10);
          c2 = peaked(1 + num % 10);
        }
        feat << " 1";
        for (double v : c1) feat << ' ' << format_real(static_cast<float>(v));
        for (double v : c2) feat << ' ' << format_real(static_cast<float>(v));
      }
      for (float v : features[i][t]) feat << ' ' << format_real(v);
      feat << '\n';
      ++det_id;
    }
  }

  for (int t = 0; t < spec.length; ++t) {
    if (t > 0 && drop_rng.uniform() < spec.homography_dropout) continue;
    const Camera& cam = camera[t];
    double inv_k = 1.0 / cam.k;
    std::array<double, 9> m = {inv_k, 0.0, cam.cx - spec.image_width / 2.0 * inv_k,
                               0.0,   inv_k, cam.cy - spec.image_height / 2.0 * inv_k,
                               0.0,   0.0,  1.0};
    hom << (t + 1);
    for (double v : m) hom << ',' << format_real(v);
    hom << '\n';
  }

  if (!spec.gap_steps.empty()) {
    std::vector<double> acc = measure_gaps(features, visible, spec.gap_steps, 1);
    for (size_t g = 0; g < acc.size(); ++g) res.gap_accuracy.push_back({spec.gap_steps[g], acc[g]});
  }
  return res;
}

std::vector<AblationCase> ablation_suite(std::uint64_t seed) {
  (void)seed;  // scenarios are fixed; the seed flows into generate() calls
  std::vector<AblationCase> out;

  ScenarioSpec cam;
  cam.name = "camera-motion-ablation";
  cam.players_team_a = 5;
  cam.players_team_b = 5;
  cam.referees = 0;
  cam.length = 512;
  cam.team_mix = 0.75;
  cam.det_noise = 0.05;
  cam.drift_rate = 0.03;
  cam.drift_revert = 0.005;
  cam.jersey_legible_prob = 0.45;
  cam.speed = 0.12;
  cam.home_radius = 7.0;
  cam.shared_home_pairs = 3;
  cam.camera_pan_amp = 18.0;
  cam.camera_pan_period = 140.0;
  cam.camera_zoom_amp = 0.18;
  cam.homography_dropout = 0.06;
  for (int i = 0; i < 10; ++i)
    cam.occlusions.push_back({i, 60 + 36 * i, 70 + 12 * (i % 3)});

  FeatureMask reid_only{true, false, false, true, false, true};
  FeatureMask reid_field = reid_only;
  FeatureMask reid_field_jersey = reid_field;
  reid_field_jersey.jersey = true;
  out.push_back({"feat-reid", cam, reid_only, SpatialMode::Frame, 7});
  out.push_back({"feat-reid-field", cam, reid_field, SpatialMode::Field, 7});
  out.push_back({"feat-reid-field-jersey", cam, reid_field_jersey, SpatialMode::Field, 7});

  ScenarioSpec occ;
  occ.name = "long-occlusion-ablation";
  occ.players_team_a = 5;
  occ.players_team_b = 5;
  occ.referees = 0;
  occ.length = 1800;
  occ.team_mix = 0.7;
  occ.det_noise = 0.04;
  occ.drift_rate = 0.02;
  occ.drift_revert = 0.01;
  occ.jersey_legible_prob = 0.4;
  occ.speed = 0.1;
  occ.home_radius = 6.0;
  occ.homography_dropout = 0.05;
  occ.occlusions = {{0, 150, 300}, {1, 500, 300}, {5, 900, 300}, {6, 1100, 300}, {2, 300, 1100}};

  FeatureMask full{true, true, true, true, false, true};
  out.push_back({"layers-7", occ, full, SpatialMode::Field, 7});
  out.push_back({"layers-9", occ, full, SpatialMode::Field, 9});
  out.push_back({"layers-10", occ, full, SpatialMode::Field, 10});
  return out;
}

}  // namespace hgtrack
