// igrf: hybrid feature selection (IG + RF filter, RFE wrapper) and MLP
// train/evaluate pipeline for tabular intrusion-detection data.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "igrf/config.hpp"
#include "igrf/errors.hpp"
#include "igrf/pipeline.hpp"
#include "igrf/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string mode = "igrf_rfe";
  std::string out_dir;
  std::string evaluator;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t rfe_epochs = 0;
  bool rfe_epochs_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_mode) {
  cmd->add_option("--config", flags.config_path, "pipeline config file (sectioned key=value)");
  cmd->add_option("--out", flags.out_dir, "output directory (overrides [out] dir)");
  cmd->add_option("--evaluator", flags.evaluator,
                  "RFE evaluator: empty for the MLP, or stub:constant:<v>, "
                  "stub:peaked:<f,..>, stub:size:<den>");
  cmd->add_option("--seed", flags.seed, "master seed (sets mlp, rf and split seeds)")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--rfe-epochs", flags.rfe_epochs,
                  "epoch budget for each RFE evaluator fit (0 = full [mlp] max_epochs)")
      ->each([&flags](const std::string&) { flags.rfe_epochs_set = true; });
  if (with_mode) {
    cmd->add_option("--mode", flags.mode,
                    "subset mode: igrf_rfe | ig_only | rf_only | union | intersection | "
                    "all_features");
  }
}

igrf::PipelineConfig resolve_config(const CommonFlags& flags) {
  igrf::PipelineConfig config = flags.config_path.empty()
                                    ? igrf::default_pipeline_config()
                                    : igrf::load_pipeline_config(flags.config_path);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (!flags.evaluator.empty()) config.evaluator = flags.evaluator;
  if (flags.seed_set) {
    config.mlp.seed = flags.seed;
    config.rf.seed = flags.seed;
    config.data.split_seed = flags.seed;
  }
  if (flags.rfe_epochs_set) config.rfe.epochs = flags.rfe_epochs;
  return config;
}

void print_selection(const igrf::SelectionResult& result, const igrf::PipelineConfig& config) {
  std::cout << "mode " << igrf::select_mode_name(result.mode) << ": "
            << result.subset.retained.size() << " features retained\n";
  std::cout << "report: " << igrf::artifact_path(config, "filter_report.json") << "\n";
  if (result.has_trace) {
    std::cout << "rfe trace: " << igrf::artifact_path(config, "rfe_trace.json") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"igrf - two-stage feature selection (information gain + random forest "
               "filter, MLP-driven recursive feature elimination) with a full "
               "preprocess/train/evaluate pipeline"};
  app.set_version_flag("--version", std::string("igrf ") + igrf::kVersion);
  app.require_subcommand(1);

  CommonFlags flags;

  auto* preprocess = app.add_subcommand("preprocess", "run the preprocessing chain");
  add_common(preprocess, flags, false);
  auto* rank_ig = app.add_subcommand("rank-ig", "rank numeric features by information gain");
  add_common(rank_ig, flags, false);
  auto* rank_rf = app.add_subcommand("rank-rf", "rank numeric features by forest importance");
  add_common(rank_rf, flags, false);
  auto* filter = app.add_subcommand("filter", "stage-1 filter: threshold + union + categoricals");
  add_common(filter, flags, true);
  auto* rfe = app.add_subcommand("rfe", "stage-2 wrapper: recursive feature elimination");
  add_common(rfe, flags, false);
  auto* train = app.add_subcommand("train", "train the classifier on the selected subset");
  add_common(train, flags, true);
  auto* evaluate = app.add_subcommand("evaluate", "evaluate the trained model on the test split");
  add_common(evaluate, flags, false);
  auto* pipeline = app.add_subcommand("pipeline", "run every stage end to end");
  add_common(pipeline, flags, true);
  auto* report = app.add_subcommand("report", "print a summary of the evaluation artifacts");
  add_common(report, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const igrf::PipelineConfig config = resolve_config(flags);

    if (preprocess->parsed()) {
      const auto artifacts = igrf::cmd_preprocess(config);
      std::cout << "preprocess done: " << artifacts.train.values.rows << " train / "
                << artifacts.val.values.rows << " val / " << artifacts.test.values.rows
                << " test rows, " << artifacts.train.feature_names.size()
                << " encoded columns\n";
      std::cout << "artifacts in " << config.out_dir << "\n";
    } else if (rank_ig->parsed()) {
      const auto ranking = igrf::cmd_rank_ig(config);
      std::cout << "ranked " << ranking.size() << " numeric features -> "
                << igrf::artifact_path(config, "ig_ranking.csv") << "\n";
    } else if (rank_rf->parsed()) {
      const auto ranking = igrf::cmd_rank_rf(config);
      std::cout << "ranked " << ranking.size() << " numeric features -> "
                << igrf::artifact_path(config, "rf_ranking.csv") << "\n";
    } else if (filter->parsed()) {
      auto mode = igrf::parse_select_mode(flags.mode);
      if (mode == igrf::SelectMode::igrf_rfe) mode = igrf::SelectMode::union_set;
      const auto result = igrf::cmd_select(config, mode);
      print_selection(result, config);
    } else if (rfe->parsed()) {
      const auto result = igrf::cmd_select(config, igrf::SelectMode::igrf_rfe);
      print_selection(result, config);
    } else if (train->parsed()) {
      if (train->count("--mode") > 0) {
        igrf::cmd_select(config, igrf::parse_select_mode(flags.mode));
      }
      const auto result = igrf::cmd_train(config);
      std::cout << "trained " << result.model.trace.epochs_run << " epochs (best epoch "
                << result.model.trace.best_epoch << ", val loss "
                << result.model.trace.best_val_loss << ")\n";
      std::cout << "test accuracy " << result.report.accuracy << "\n";
    } else if (evaluate->parsed()) {
      const auto result = igrf::cmd_evaluate(config);
      std::cout << "test accuracy " << result.accuracy << " (weighted f1 " << result.weighted.f1
                << ")\n";
      std::cout << "report: " << igrf::artifact_path(config, "eval_report.json") << "\n";
    } else if (pipeline->parsed()) {
      igrf::cmd_pipeline(config, igrf::parse_select_mode(flags.mode));
      std::cout << igrf::cmd_report(config);
    } else if (report->parsed()) {
      std::cout << igrf::cmd_report(config);
    }
    return 0;
  } catch (const igrf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const igrf::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const igrf::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
