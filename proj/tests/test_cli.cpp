// End-to-end checks of the command-line surface. The binary path arrives in
// HGTRACK_CLI (set by ctest); the suite is skipped when it is absent.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <string>

#include "hgtrack/scorer.hpp"
#include "hgtrack/synth.hpp"

using namespace hgtrack;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& cmd) {
  fs::path tmp = fs::temp_directory_path() / "hgtrack_cli_out.txt";
  int status = std::system((cmd + " > " + tmp.string() + " 2>&1").c_str());
  int code = status == -1 ? -1 : WEXITSTATUS(status);
  std::ifstream in(tmp);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {code, text};
}

}  // namespace

TEST_CASE("command-line surface") {
  const char* cli_env = std::getenv("HGTRACK_CLI");
  if (!cli_env) {
    MESSAGE("HGTRACK_CLI not set; skipping CLI tests");
    return;
  }
  std::string cli = cli_env;

  fs::path dir = fs::temp_directory_path() / "hgtrack_cli_tests";
  fs::remove_all(dir);
  fs::create_directories(dir);

  ScenarioSpec spec;
  spec.name = "cli";
  spec.players_team_a = 2;
  spec.players_team_b = 2;
  spec.referees = 0;
  spec.length = 60;
  spec.occlusions = {{0, 20, 15}};
  GenerateResult files = generate(spec, 31, (dir / "data").string());

  // Hand weights over the default feature layout.
  FeatureMask mask;
  std::string layout = feature_layout_tag(mask, SpatialMode::Field);
  int dim = edge_feature_dim(mask, SpatialMode::Field);
  ScorerWeights w = init_scorer_weights(ScorerKind::Logistic, 4, dim, dim, 0, layout, 0);
  for (AffineLayer& enc : w.encoders) {
    std::fill(enc.W.begin(), enc.W.end(), 0.0);
    for (int i = 0; i < dim; ++i) enc.W[static_cast<size_t>(i) * dim + i] = 1.0;
    std::fill(enc.b.begin(), enc.b.end(), 0.0);
  }
  w.head_w = {12.0, 2.0, 0.0, 1.0, -0.8, -1.0};
  w.head_b = -9.0;
  std::string wpath = (dir / "w.json").string();
  save_weights(w, wpath);

  SUBCASE("track runs, writes output, dumps debug graphs") {
    std::string out = (dir / "pred.txt").string();
    std::string dbg = (dir / "dbg").string();
    RunResult r = run(cli + " track --det " + files.det_path + " --features " +
                      files.features_path + " --homography " + files.homography_path +
                      " --weights " + wpath + " --out " + out + " --debug-graphs " + dbg);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("tracks ") != std::string::npos);
    CHECK(fs::exists(out));
    int dumps = 0;
    for (auto& entry : fs::directory_iterator(dbg)) {
      (void)entry;
      ++dumps;
    }
    CHECK(dumps > 0);
  }

  SUBCASE("a missing feature file exits 1 and names the path") {
    std::string out = (dir / "pred2.txt").string();
    std::string missing = (dir / "no_such_features.tsv").string();
    RunResult r = run(cli + " track --det " + files.det_path + " --features " + missing +
                      " --homography " + files.homography_path + " --weights " + wpath +
                      " --out " + out);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("no_such_features.tsv") != std::string::npos);
  }

  SUBCASE("eval prints the report and gap prints one row per step") {
    RunResult e = run(cli + " eval " + files.gt_path + " " + files.gt_path);
    CHECK(e.exit_code == 0);
    CHECK(e.output.find("100.00") != std::string::npos);

    RunResult g = run(cli + " gap --gt " + files.gt_path + " --features " + files.features_path +
                      " --homography " + files.homography_path + " --steps 1,5,10,20");
    CHECK(g.exit_code == 0);
    int rows = 0;
    for (char c : g.output)
      if (c == '\n') ++rows;
    CHECK(rows == 5);
  }

  SUBCASE("synth is byte-deterministic under a fixed seed") {
    RunResult a = run(cli + " synth --case feat-reid --seed 9 --out-dir " + (dir / "sa").string());
    RunResult b = run(cli + " synth --case feat-reid --seed 9 --out-dir " + (dir / "sb").string());
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    std::ifstream fa((dir / "sa" / "det.txt"));
    std::ifstream fb((dir / "sb" / "det.txt"));
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }
}
