#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "igrf/mlp.hpp"

namespace igrf {

struct DataConfig {
  std::string train_csv;
  std::string test_csv;
  std::string label = "attack_cat";
  std::string binary_label = "label";
  std::vector<std::string> categorical = {"proto", "service", "state"};
  std::vector<std::string> classes;  // empty = discover from the training file
  std::set<std::string> ignore;      // header columns to skip entirely (e.g. id)
  std::set<std::string> drop_classes = {"Analysis", "Backdoor", "Shellcode", "Worms"};
  std::string oversample_class = "Normal";
  std::size_t oversample_factor = 2;  // 1 disables oversampling
  double split_ratio = 0.5;
  std::uint64_t split_seed = 2022;
};

struct IgConfig {
  std::size_t bins = 10;
  double threshold = 0.25;
};

struct RfConfig {
  std::size_t trees = 1000;
  double threshold = 0.02;
  std::uint64_t seed = 2022;
  std::size_t max_depth = 0;
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(n))
  std::size_t threads = 0;             // 0 = hardware concurrency
};

struct RfeConfig {
  std::size_t patience = 5;
  std::vector<std::uint64_t> seeds = {2022, 2023, 2024, 2025, 2026,
                                      2027, 2028, 2029, 2030, 2031};
  std::size_t epochs = 0;  // evaluator epoch budget; 0 = mlp.max_epochs
  std::size_t threads = 1;
};

struct PipelineConfig {
  DataConfig data;
  IgConfig ig;
  RfConfig rf;
  RfeConfig rfe;
  MlpConfig mlp;
  std::string out_dir = "out";
  std::string evaluator;  // empty = production MLP evaluator, else "stub:..."
};

/// Parses the sectioned key=value config file. Every key can be overridden
/// by an IGRF_<SECTION>_<KEY> environment variable (e.g. IGRF_RF_TREES).
/// Unknown keys are a ConfigError.
PipelineConfig load_pipeline_config(const std::string& path);

/// Applies environment overrides to built-in defaults without a file.
PipelineConfig default_pipeline_config();

/// The resolved configuration rendered back to config-file text (one line
/// per key, all defaults expanded) for the run manifest.
std::string config_echo(const PipelineConfig& c);

}  // namespace igrf
