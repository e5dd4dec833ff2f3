#pragma once

#include <map>
#include <string>
#include <vector>

#include "igrf/config.hpp"
#include "igrf/encode.hpp"
#include "igrf/ensemble_filter.hpp"
#include "igrf/manifest.hpp"
#include "igrf/metrics.hpp"
#include "igrf/mlp.hpp"
#include "igrf/rfe.hpp"
#include "igrf/table.hpp"

namespace igrf {

enum class SelectMode { igrf_rfe, ig_only, rf_only, union_set, intersection, all_features };

SelectMode parse_select_mode(const std::string& name);
std::string select_mode_name(SelectMode mode);

/// A feature with its ranking score; schema_column indexes the cleaned schema.
struct RankedFeature {
  std::size_t schema_column = 0;
  std::string name;
  double score = 0.0;  // normalized IG or MDI, the value thresholds apply to
  double raw = 0.0;    // raw IG in bits (IG ranking only)
};

/// Everything the later stages consume, produced by preprocess and
/// materialized under out_dir.
struct PreprocessArtifacts {
  Schema schema;        // cleaned schema (binary label dropped, classes pinned)
  Table ranking_table;  // deduplicated branch used for IG/RF ranking
  EncodedMatrix train, val, test;
  MinMaxScaler scaler;
  std::map<std::string, std::size_t> train_counts_raw;  // before oversampling
  std::map<std::string, std::size_t> train_counts;
  std::map<std::string, std::size_t> val_counts;
  std::map<std::string, std::size_t> test_counts;
};

std::string artifact_path(const PipelineConfig& config, const std::string& name);

/// Builds the Schema from a CSV header plus the config's column-kind
/// declarations.
Schema schema_from_csv_header(const std::string& path, const DataConfig& data);

/// Full preprocessing chain: load, clean, minority removal, then the
/// ranking branch (dedup) and the training branch (oversample, one-hot
/// against the training vocabulary, min-max with clipping for val/test,
/// stratified holdout split of the original test set).
PreprocessArtifacts run_preprocess(const PipelineConfig& config);

void write_preprocess_artifacts(const PipelineConfig& config, const PreprocessArtifacts& a,
                                RunManifest& manifest);
PreprocessArtifacts load_preprocess_artifacts(const PipelineConfig& config);

std::vector<RankedFeature> rank_ig_features(const PipelineConfig& config,
                                            const PreprocessArtifacts& a);
std::vector<RankedFeature> rank_rf_features(const PipelineConfig& config,
                                            const PreprocessArtifacts& a);
void write_ranking_csv(const std::string& path, const std::vector<RankedFeature>& ranking,
                       bool with_raw);
std::vector<RankedFeature> read_ranking_csv(const std::string& path, const Schema& schema,
                                            bool with_raw);

/// Production wrapper-stage scorer: trains the MLP on the subset's encoded
/// columns and returns validation accuracy; deterministic per (subset, seed).
class MlpEvaluator : public Evaluator {
 public:
  MlpEvaluator(MlpConfig mlp, std::size_t epoch_budget, const EncodedMatrix& train,
               const EncodedMatrix& val);
  double score(const std::vector<std::size_t>& subset, std::uint64_t seed) override;
  std::vector<std::size_t> encoded_columns(const std::vector<std::size_t>& subset) const;

 private:
  MlpConfig mlp_;
  const EncodedMatrix& train_;
  const EncodedMatrix& val_;
};

/// Maps subset schema ids onto encoded column indices via the group map;
/// a categorical feature contributes its whole one-hot group.
std::vector<std::size_t> subset_encoded_columns(const EncodedMatrix& m,
                                                const std::vector<std::size_t>& subset);

struct SelectionResult {
  SelectMode mode = SelectMode::all_features;
  FeatureSubset subset;
  bool has_trace = false;
  RfeTrace trace;  // igrf_rfe only
};

/// Stage-combination dispatcher for the comparison modes. Reuses ranking
/// CSVs when present, computes them otherwise. For igrf_rfe the wrapper
/// stage runs with the configured evaluator (production MLP unless the
/// config names a stub).
SelectionResult run_select(const PipelineConfig& config, SelectMode mode,
                           const PreprocessArtifacts& a, RunManifest& manifest);

struct TrainEvalResult {
  MlpModel model;
  std::vector<std::size_t> encoded_columns;
  EvalReport report;
};

MlpModel train_on_subset(const PipelineConfig& config, const PreprocessArtifacts& a,
                         const std::vector<std::size_t>& encoded_columns);
EvalReport evaluate_on_test(const PreprocessArtifacts& a, const MlpModel& model,
                            const std::vector<std::size_t>& encoded_columns, LossKind loss_kind);

void write_eval_report(const PipelineConfig& config, const EvalReport& report);
std::string eval_report_json(const EvalReport& report);

// CLI entry points. Each one loads what it needs from out_dir, writes its
// artifacts and updates the manifest.
PreprocessArtifacts cmd_preprocess(const PipelineConfig& config);
std::vector<RankedFeature> cmd_rank_ig(const PipelineConfig& config);
std::vector<RankedFeature> cmd_rank_rf(const PipelineConfig& config);
SelectionResult cmd_select(const PipelineConfig& config, SelectMode mode);
TrainEvalResult cmd_train(const PipelineConfig& config);
EvalReport cmd_evaluate(const PipelineConfig& config);
void cmd_pipeline(const PipelineConfig& config, SelectMode mode);
std::string cmd_report(const PipelineConfig& config);

}  // namespace igrf
