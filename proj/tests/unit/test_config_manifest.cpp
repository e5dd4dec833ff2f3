#include <doctest.h>

#include <cstdlib>

#include "common/test_util.hpp"
#include "igrf/config.hpp"
#include "igrf/errors.hpp"
#include "igrf/manifest.hpp"
#include "igrf/sha256.hpp"
#include "igrf/version.hpp"

using namespace igrf;
using test::TempDir;
using test::write_file;

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
}

TEST_CASE("defaults carry the published experiment settings") {
  const PipelineConfig c = default_pipeline_config();
  CHECK(c.mlp.hidden_sizes == std::vector<std::size_t>{128, 128});
  CHECK(c.mlp.learning_rate == 0.0003);
  CHECK(c.mlp.batch_size == 64);
  CHECK(c.mlp.max_epochs == 300);
  CHECK(c.mlp.early_stop_patience == 30);
  CHECK(c.ig.bins == 10);
  CHECK(c.ig.threshold == 0.25);
  CHECK(c.rf.trees == 1000);
  CHECK(c.rf.threshold == 0.02);
  CHECK(c.rf.min_samples_split == 2);
  CHECK(c.rfe.patience == 5);
  CHECK(c.rfe.seeds == std::vector<std::uint64_t>{2022, 2023, 2024, 2025, 2026, 2027, 2028, 2029,
                                                  2030, 2031});
  CHECK(c.data.drop_classes ==
        std::set<std::string>{"Analysis", "Backdoor", "Shellcode", "Worms"});
  CHECK(c.data.oversample_factor == 2);
  CHECK(c.data.split_ratio == 0.5);
}

TEST_CASE("config file parsing") {
  TempDir dir("cfg");
  const auto path = dir.file("igrf.conf");
  write_file(path,
             "# comment line\n"
             "[data]\n"
             "train = a.csv\n"
             "test = b.csv   # trailing comment\n"
             "categorical = proto , service\n"
             "drop_classes =\n"
             "[rf]\n"
             "trees = 50\n"
             "[rfe]\n"
             "seeds = 100-103\n"
             "[mlp]\n"
             "hidden = 32,16\n"
             "loss = squared_error\n");
  const PipelineConfig c = load_pipeline_config(path);
  CHECK(c.data.train_csv == "a.csv");
  CHECK(c.data.test_csv == "b.csv");
  CHECK(c.data.categorical == std::vector<std::string>{"proto", "service"});
  CHECK(c.data.drop_classes.empty());
  CHECK(c.rf.trees == 50);
  CHECK(c.rfe.seeds == std::vector<std::uint64_t>{100, 101, 102, 103});
  CHECK(c.mlp.hidden_sizes == std::vector<std::size_t>{32, 16});
  CHECK(c.mlp.loss == LossKind::squared_error);
  // untouched keys keep their defaults
  CHECK(c.ig.threshold == 0.25);
}

TEST_CASE("config errors") {
  TempDir dir("cfg");
  const auto path = dir.file("igrf.conf");

  SUBCASE("unknown key") {
    write_file(path, "[rf]\ntreez = 10\n");
    CHECK_THROWS_AS(load_pipeline_config(path), ConfigError);
  }
  SUBCASE("bad number") {
    write_file(path, "[rf]\ntrees = lots\n");
    CHECK_THROWS_AS(load_pipeline_config(path), ConfigError);
  }
  SUBCASE("key outside a section") {
    write_file(path, "trees = 10\n");
    CHECK_THROWS_AS(load_pipeline_config(path), ConfigError);
  }
  SUBCASE("bad loss name") {
    write_file(path, "[mlp]\nloss = hinge\n");
    CHECK_THROWS_AS(load_pipeline_config(path), ConfigError);
  }
  SUBCASE("invalid ratio") {
    write_file(path, "[data]\nsplit_ratio = 1.5\n");
    CHECK_THROWS_AS(load_pipeline_config(path), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_pipeline_config(dir.file("nope.conf")), ConfigError);
  }
}

TEST_CASE("environment variables override file values") {
  TempDir dir("cfg");
  const auto path = dir.file("igrf.conf");
  write_file(path, "[rf]\ntrees = 50\n");

  setenv("IGRF_RF_TREES", "75", 1);
  setenv("IGRF_IG_THRESHOLD", "0.5", 1);
  const PipelineConfig c = load_pipeline_config(path);
  unsetenv("IGRF_RF_TREES");
  unsetenv("IGRF_IG_THRESHOLD");

  CHECK(c.rf.trees == 75);
  CHECK(c.ig.threshold == 0.5);
}

TEST_CASE("config echo round trips through the parser") {
  PipelineConfig c = default_pipeline_config();
  c.data.train_csv = "train.csv";
  c.data.test_csv = "test.csv";
  c.rf.trees = 123;
  c.mlp.loss = LossKind::squared_error;

  TempDir dir("cfg");
  const auto path = dir.file("echo.conf");
  write_file(path, config_echo(c));
  const PipelineConfig back = load_pipeline_config(path);
  CHECK(config_echo(back) == config_echo(c));
}

TEST_CASE("manifest determinism and persistence") {
  TempDir dir("man");
  write_file(dir.file("input.txt"), "hello");
  write_file(dir.file("output.txt"), "world");

  RunManifest a(kVersion, "config text");
  a.record_stage("stage1", {dir.file("input.txt")}, {dir.file("output.txt")});
  a.record_counts("stage1", "counts", {{"Normal", 5}, {"DoS", 2}});
  a.record_features("select", "selected_features", {"a", "b"});

  RunManifest b(kVersion, "config text");
  b.record_stage("stage1", {dir.file("input.txt")}, {dir.file("output.txt")});
  b.record_counts("stage1", "counts", {{"Normal", 5}, {"DoS", 2}});
  b.record_features("select", "selected_features", {"a", "b"});

  CHECK(a.to_json() == b.to_json());
  CHECK(a == b);

  const auto manifest_path = dir.file("manifest.json");
  a.save(manifest_path);
  const RunManifest loaded = RunManifest::load(manifest_path);
  CHECK(loaded == a);
  CHECK(loaded.to_json() == a.to_json());

  // different input bytes change the stage hashes
  write_file(dir.file("input.txt"), "hello2");
  RunManifest c(kVersion, "config text");
  c.record_stage("stage1", {dir.file("input.txt")}, {dir.file("output.txt")});
  CHECK(c.to_json() != a.to_json());
}
