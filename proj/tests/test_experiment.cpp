// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gaborodo/experiment.hpp"
#include "gaborodo/util.hpp"

using namespace gaborodo;
namespace fs = std::filesystem;

namespace {

fs::path temp_root() {
  auto dir = fs::temp_directory_path() / "gaborodo_test_experiment";
  fs::create_directories(dir);
  return dir;
}

// Small, fast experiment: one broadband texture, one straight 1.3 s path,
// 48 px views with physically matched blur/gain.
std::string small_config_toml(const std::string& out_dir) {
  return R"(schema_version = 1

[run]
seed = 42
output_dir = ")" +
         out_dir + R"("
jobs = 2
stride_ms = 33

[sensor]
view_px = 48
blur_sigma_px = 0.5625
gain = 8.6756e-4

[masks]
xi0 = 6.0
sigma = 1.0
alpha = 1.0

[[textures]]
kind = "bandlimited_noise"
seed = 7
resolution_px = 256
extent_m = 0.5
low_cpm = 60.0
high_cpm = 240.0

[[paths]]
profile = "straight"
v = 0.2
duration_s = 1.3

[heights]
mode = "per_window"
range_pct = [0.0]

[gyro]
noise_std = 0.0
)";
}

}  // namespace

TEST_CASE("config parses, validates and round-trips through TOML") {
  auto dir = temp_root();
  auto cfg_file = dir / "cfg.toml";
  std::ofstream(cfg_file) << small_config_toml((dir / "out").string());
  ExperimentConfig cfg = ExperimentConfig::from_file(cfg_file);
  CHECK(cfg.run.seed == 42);
  CHECK(cfg.sensor.view_px == 48);
  CHECK(cfg.masks.params.xi0 == 6.0);
  REQUIRE(cfg.textures.size() == 1);
  CHECK(cfg.textures[0].high_cpm == 240.0);
  REQUIRE(cfg.paths.size() == 1);
  CHECK(cfg.paths[0].spec.v == 0.2);
  CHECK(cfg.heights.ranges_pct == std::vector<double>{0.0});

  // Emit all resolved defaults and reparse: equality on a few spot fields.
  ExperimentConfig back = ExperimentConfig::from_toml(cfg.to_toml());
  CHECK(back.sensor.gain == cfg.sensor.gain);
  CHECK(back.decoder.confidence_threshold == cfg.decoder.confidence_threshold);
  CHECK(back.conditioning.input_rate_hz == cfg.conditioning.input_rate_hz);
  CHECK(back.optimizer.bounds.xi0_hi == cfg.optimizer.bounds.xi0_hi);
}

TEST_CASE("schema violations are rejected before any compute") {
  auto base = small_config_toml("x");
  CHECK_THROWS(ExperimentConfig::from_toml(toml::parse(base + "\n[sensor]\nbogus_key = 1\n")));
  CHECK_THROWS(ExperimentConfig::from_toml(toml::parse(base + "\n[run]\nstride_ms = 7\n")));
  std::string no_tex = "schema_version = 1\n[[paths]]\nprofile = \"straight\"\n";
  CHECK_THROWS(ExperimentConfig::from_toml(toml::parse(no_tex)));
  std::string bad_ver = base;
  bad_ver.replace(bad_ver.find("schema_version = 1"), 18, "schema_version = 9");
  CHECK_THROWS(ExperimentConfig::from_toml(toml::parse(bad_ver)));
}

TEST_CASE("run_experiment produces the full artifact tree and sane numbers") {
  auto dir = temp_root();
  auto out = dir / "run1";
  fs::remove_all(out);
  ExperimentConfig cfg = ExperimentConfig::from_toml(toml::parse(small_config_toml(out.string())));
  ExperimentSummary summary = run_experiment(cfg);

  REQUIRE(summary.rows.size() == 1);
  const ScenarioRow& row = summary.rows[0];
  CHECK(row.windows == 10);  // floor((1301-1000)/33)+1
  CHECK(row.accept_rate > 0.8);
  CHECK(row.rmse < 0.05);
  CHECK(row.ate_m < 0.05);

  for (const char* f : {"resolved.toml", "manifest.json", "summary.csv", "summary.md", "masks.json"})
    CHECK(fs::exists(out / f));
  auto sdir = out / row.name;
  for (const char* f : {"trace.csv", "estimates.csv", "est_path.csv", "ref_path.csv", "gyro.csv",
                        "score.json", "overlay.svg"})
    CHECK(fs::exists(sdir / f));

  // The resolved config reparses and fully materializes defaults.
  ExperimentConfig resolved = ExperimentConfig::from_file(out / "resolved.toml");
  CHECK(resolved.decoder.window_len == 1000);
  CHECK(resolved.conditioning.lowpass_hz == 450.0);
}

TEST_CASE("repeat runs are byte-identical") {
  auto dir = temp_root();
  auto out1 = dir / "rep1";
  auto out2 = dir / "rep2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  ExperimentConfig cfg1 = ExperimentConfig::from_toml(toml::parse(small_config_toml(out1.string())));
  ExperimentConfig cfg2 = ExperimentConfig::from_toml(toml::parse(small_config_toml(out2.string())));
  run_experiment(cfg1);
  run_experiment(cfg2);
  // output_dir differs inside resolved.toml; compare everything else.
  uint64_t h1 = 0, h2 = 0;
  for (auto [out, h] : {std::pair{&out1, &h1}, std::pair{&out2, &h2}}) {
    for (const auto& e : fs::recursive_directory_iterator(*out)) {
      if (!e.is_regular_file() || e.path().filename() == "resolved.toml") continue;
      std::ifstream in(e.path(), std::ios::binary);
      std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      std::string rel = fs::relative(e.path(), *out).generic_string();
      *h = fnv1a64(rel.data(), rel.size(), *h);
      *h = fnv1a64(data.data(), data.size(), *h);
    }
  }
  CHECK(h1 == h2);
  CHECK(hash_output_tree(out1) != 0);
}

TEST_CASE("different seeds change the numeric outputs") {
  auto dir = temp_root();
  auto out1 = dir / "seed1";
  auto out2 = dir / "seed2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  ExperimentConfig a = ExperimentConfig::from_toml(toml::parse(small_config_toml(out1.string())));
  ExperimentConfig b = a;
  b.run.seed = 43;
  b.run.output_dir = out2.string();
  run_experiment(a);
  run_experiment(b);
  std::ifstream t1(out1 / "s00_t0_p0_h0" / "trace.csv"), t2(out2 / "s00_t0_p0_h0" / "trace.csv");
  std::string s1((std::istreambuf_iterator<char>(t1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(t2)), std::istreambuf_iterator<char>());
  CHECK(s1 != s2);
}

TEST_CASE("failure still writes the manifest with completed stages") {
  auto dir = temp_root();
  auto out = dir / "fail";
  fs::remove_all(out);
  ExperimentConfig cfg = ExperimentConfig::from_toml(toml::parse(small_config_toml(out.string())));
  cfg.paths[0].file = (dir / "no_such_path.csv").string();  // stage will fail
  CHECK_THROWS(run_experiment(cfg));
  REQUIRE(fs::exists(out / "manifest.json"));
  std::ifstream in(out / "manifest.json");
  std::string manifest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(manifest.find("\"failed\"") != std::string::npos);
  CHECK(manifest.find("resolved_config") != std::string::npos);
  CHECK(fs::exists(out / "resolved.toml"));  // partial outputs preserved
}

TEST_CASE("mask-comparison experiment: optimized beats fixed on the held-out split") {
  auto dir = temp_root();
  auto out = dir / "optrun";
  fs::remove_all(out);
  ExperimentConfig cfg = ExperimentConfig::from_toml(toml::parse(small_config_toml(out.string())));
  // Texture band above the fixed mask's passband: the fixed Gabor rejects
  // almost everything, any retuned carrier wins decisively.
  cfg.textures.clear();
  for (uint64_t seed : {41ull, 42ull}) {
    TextureSpec t;
    t.kind = TextureKind::BandlimitedNoise;
    t.seed = seed;
    t.resolution_px = 256;
    t.extent_m = 0.5;
    t.low_cpm = 170.0;
    t.high_cpm = 230.0;
    cfg.textures.push_back(t);
  }
  PathEntry p2;
  p2.spec.profile = PathProfile::Straight;
  p2.spec.v = 0.3;
  p2.spec.duration_s = 1.3;
  cfg.paths.push_back(p2);
  cfg.optimizer.enabled = true;
  cfg.optimizer.windows_per_scenario = 3;
  cfg.optimizer.height_range_pct = 0.0;
  cfg.optimizer.max_evals = 40;
  cfg.optimizer.bounds.xi0_lo = 3.0;
  cfg.optimizer.bounds.xi0_hi = 10.0;
  cfg.optimizer.train_frac = 0.5;
  cfg.optimizer.val_frac = 0.0;

  ExperimentSummary summary = run_experiment(cfg);
  REQUIRE(summary.masks.has_value());
  const MaskComparison& mc = *summary.masks;
  CHECK(mc.optimized_train <= mc.fixed_train);
  CHECK(mc.optimized_test <= mc.fixed_test);
  CHECK(mc.optimized.xi0 > 6.0);  // the band demands a higher carrier
  CHECK(fs::exists(out / "optim_result.json"));
  CHECK(fs::exists(out / "optim_history.csv"));
  std::ifstream in(out / "optim_result.json");
  std::string js((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(js.find("\"split\"") != std::string::npos);
  CHECK(js.find("\"train\"") != std::string::npos);
}

TEST_CASE("height sweep adds one scenario per range") {
  auto dir = temp_root();
  auto out = dir / "sweep";
  fs::remove_all(out);
  ExperimentConfig cfg = ExperimentConfig::from_toml(toml::parse(small_config_toml(out.string())));
  cfg.heights.ranges_pct = {0.0, 25.0};
  ExperimentSummary summary = run_experiment(cfg);
  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0].height_range_pct == 0.0);
  CHECK(summary.rows[1].height_range_pct == 25.0);
}
