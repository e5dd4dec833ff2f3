#include "acceptance/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "common/gradient_check.hpp"
#include "common/oracles.hpp"
#include "common/test_util.hpp"
#include "igrf/config.hpp"
#include "igrf/csv.hpp"
#include "igrf/info_gain.hpp"
#include "igrf/metrics.hpp"
#include "igrf/pipeline.hpp"
#include "igrf/preprocess.hpp"
#include "igrf/random_forest.hpp"
#include "igrf/rfe.hpp"
#include "igrf/sha256.hpp"

namespace igrf::acceptance {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (log.tellp() > 0) log << "; ";
      log << what;
    }
  }
};

// ---------------------------------------------------------------------------
// 1. Metric oracle equivalence.

CriterionResult crit_metrics(std::string* digest) {
  const auto start = Clock::now();
  Check check;
  Sha256 hash;

  Rng rng(20221);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + uniform_index(rng, 5);   // 2..6
    const std::size_t n = 5 + uniform_index(rng, 46);  // 5..50
    const auto truth = test::random_labels(rng, n, k);
    const auto pred = test::random_labels(rng, n, k);
    Matrix probs(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < k; ++j) {
        probs(i, j) = 0.05 + igrf::uniform_real(rng);
        sum += probs(i, j);
      }
      for (std::size_t j = 0; j < k; ++j) probs(i, j) /= sum;
    }

    const EvalReport report = weighted_report(truth, pred, k, &probs);
    const auto expected = oracle::weighted_rates(truth, pred, k);

    check.expect(report.accuracy == expected.accuracy, "accuracy mismatch");
    check.expect(report.weighted.precision == expected.weighted.precision,
                 "weighted precision mismatch");
    check.expect(report.weighted.recall == expected.weighted.recall, "weighted recall mismatch");
    check.expect(report.weighted.f1 == expected.weighted.f1, "weighted f1 mismatch");
    check.expect(report.weighted.fpr == expected.weighted.fpr, "weighted fpr mismatch");

    std::vector<double> scores(n);
    std::vector<std::int32_t> binary(n);
    for (std::size_t c = 0; c < k; ++c) {
      const auto counts = oracle::count_one_vs_all(truth, pred, static_cast<std::int32_t>(c));
      const auto r = oracle::rates_from_counts(counts);
      check.expect(report.per_class[c].precision == r.precision, "precision mismatch");
      check.expect(report.per_class[c].recall == r.recall, "recall mismatch");
      check.expect(report.per_class[c].fpr == r.fpr, "fpr mismatch");
      check.expect(report.per_class[c].f1 == r.f1, "f1 mismatch");

      if (c < report.roc.size() && !report.roc[c].points.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
          scores[i] = probs(i, c);
          binary[i] = truth[i] == static_cast<std::int32_t>(c) ? 1 : 0;
        }
        const double rank_auc = oracle::auc_by_pairs(scores, binary);
        check.expect(std::abs(report.roc[c].auc - rank_auc) <= 1e-12,
                     "auc off the rank-statistic oracle by more than 1e-12");
        hash.update(format_double(report.roc[c].auc));
      }
    }
    hash.update(format_double(report.accuracy));
    hash.update(format_double(report.weighted.f1));
  }

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s >= 10s");
  if (digest) *digest = hash.hex_digest();

  CriterionResult result;
  result.passed = check.ok;
  std::ostringstream detail;
  detail << "1000 fixtures, exact rate equality, AUC within 1e-12 of the pair oracle, "
         << elapsed << "s";
  result.detail = check.ok ? detail.str() : check.log.str();
  return result;
}

// ---------------------------------------------------------------------------
// 2. Gradient correctness.

CriterionResult crit_gradients(std::string* digest) {
  const auto start = Clock::now();
  Check check;
  Sha256 hash;

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const auto kind : {LossKind::cross_entropy, LossKind::squared_error}) {
      MlpConfig config;
      config.hidden_sizes = {7, 5};
      config.loss = kind;
      config.seed = seed;
      const std::size_t input_dim = 3 + seed % 3;
      const std::size_t n_classes = 2 + seed % 2;
      const double err = test::max_relative_gradient_error(config, input_dim, n_classes,
                                                           4 + seed % 4, 1000 + seed);
      worst = std::max(worst, err);
      hash.update(format_double(err));
    }
  }
  check.expect(worst < 1e-4, "max relative gradient error " + std::to_string(worst));

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s >= 30s");
  if (digest) *digest = hash.hex_digest();

  CriterionResult result;
  result.passed = check.ok;
  std::ostringstream detail;
  detail << "max relative error " << worst << " over 10 seeds x 2 losses, " << elapsed << "s";
  result.detail = check.ok ? detail.str() : check.log.str();
  return result;
}

// ---------------------------------------------------------------------------
// 3. Information-gain identities.

CriterionResult crit_info_gain(std::string* digest) {
  Check check;
  Sha256 hash;
  const Discretizer d;

  {
    const std::vector<double> x{0, 1, 0, 1, 0, 1, 0, 1};
    const std::vector<std::int32_t> y{0, 1, 0, 1, 0, 1, 0, 1};
    const double ig = information_gain(x, y, 2, d);
    const double h = entropy_bits(std::vector<std::size_t>{4, 4});
    check.expect(ig == h, "IG(Y,Y) != H(Y) exactly");
  }
  {
    const std::vector<double> x(12, 7.5);
    const std::vector<std::int32_t> y{0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0};
    check.expect(information_gain(x, y, 2, d) == 0.0, "IG(const, Y) != 0 exactly");
  }
  {
    const std::vector<double> x{0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<std::int32_t> y{0, 0, 0, 0, 0, 0, 1, 1};
    const double ig = information_gain(x, y, 2, d);
    check.expect(std::abs(ig - 0.3113) < 1e-4,
                 "two-group hand case off 0.3113: got " + std::to_string(ig));
    hash.update(format_double(ig));
  }

  Rng rng(333);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 80);
    const std::size_t k = 2 + uniform_index(rng, 5);
    std::vector<double> x(n);
    std::vector<std::int32_t> y(n);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(test::gaussian(rng) * 4) / 2.0;
      y[i] = static_cast<std::int32_t>(uniform_index(rng, k));
      ++counts[static_cast<std::size_t>(y[i])];
    }
    const double ig = information_gain(x, y, k, d);
    const double h = entropy_bits(counts);
    check.expect(ig >= -1e-12 && ig <= h + 1e-12, "IG outside [0, H(Y)]");
    hash.update(format_double(ig));
  }
  if (digest) *digest = hash.hex_digest();

  CriterionResult result;
  result.passed = check.ok;
  result.detail = check.ok ? "identities exact, hand case within 1e-4, 500 bounded fixtures"
                           : check.log.str();
  return result;
}

// ---------------------------------------------------------------------------
// 4. Forest sanity.

CriterionResult crit_forest(std::string* digest) {
  const auto start = Clock::now();
  Check check;
  Sha256 hash;

  // single-tree forests against exhaustive CART on 4-point fixtures
  {
    const std::vector<std::vector<std::vector<double>>> fixtures = {
        {{1}, {2}, {9}, {10}},
        {{1, 5}, {2, 1}, {9, 4}, {10, 2}},
        {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
    };
    const std::vector<std::vector<std::int32_t>> labels = {
        {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}};
    for (std::size_t fx = 0; fx < fixtures.size(); ++fx) {
      const auto& rows = fixtures[fx];
      const std::size_t n_features = rows[0].size();
      Matrix x(rows.size(), n_features);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < n_features; ++c) x(r, c) = rows[r][c];
      }
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ForestConfig config;
        config.n_trees = 1;
        config.seed = seed;
        config.features_per_split = n_features;
        config.n_threads = 1;
        const Forest f = fit_forest(x, labels[fx], 2, config);

        // rebuild the tree's bootstrap from the documented stream contract
        Rng stream(seed);
        std::vector<std::vector<double>> boot_rows;
        std::vector<std::int32_t> boot_y;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto r = static_cast<std::size_t>(uniform_index(stream, rows.size()));
          boot_rows.push_back(rows[r]);
          boot_y.push_back(labels[fx][r]);
        }
        for (const auto& row : rows) {
          const auto got = predict(f, row);
          const auto expected = oracle::cart_predict(boot_rows, boot_y, 2, row);
          check.expect(got == expected, "single tree disagrees with exhaustive CART");
        }
        hash.update(serialize_forest(f));
      }
    }
  }

  // importance sums to 1
  {
    Rng rng(9001);
    const std::size_t n = 500;
    Matrix x(n, 6);
    std::vector<std::int32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<std::int32_t>(uniform_index(rng, 3));
      for (std::size_t c = 0; c < 6; ++c) x(i, c) = test::gaussian(rng);
      x(i, 0) += 1.5 * static_cast<double>(y[i]);
    }
    ForestConfig config;
    config.n_trees = 40;
    config.seed = 17;
    const Forest f = fit_forest(x, y, 3, config);
    const auto scores = importance(f);
    double total = 0;
    for (const auto& s : scores) total += s.mdi;
    check.expect(std::abs(total - 1.0) <= 1e-9, "MDI sum off 1 by more than 1e-9");
    for (const auto& s : scores) hash.update(format_double(s.mdi));
  }

  // planted-informative feature ranks first in >= 99/100 seeded runs
  {
    Rng data_rng(777);
    const std::size_t n = 1000, n_features = 5;
    Matrix x(n, n_features);
    std::vector<std::int32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<std::int32_t>(uniform_index(data_rng, 2));
      x(i, 0) = static_cast<double>(y[i]);
      for (std::size_t c = 1; c < n_features; ++c) x(i, c) = test::gaussian(data_rng);
    }
    int rank_one = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      ForestConfig config;
      config.n_trees = 200;
      config.seed = seed;
      const Forest f = fit_forest(x, y, 2, config);
      const auto scores = importance(f);
      std::size_t argmax = 0;
      for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i].mdi > scores[argmax].mdi) argmax = i;
      }
      if (argmax == 0) ++rank_one;
    }
    check.expect(rank_one >= 99,
                 "planted feature ranked first only " + std::to_string(rank_one) + "/100");
    hash.update(std::to_string(rank_one));
  }

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 120.0, "runtime " + std::to_string(elapsed) + "s >= 2min");
  if (digest) *digest = hash.hex_digest();

  CriterionResult result;
  result.passed = check.ok;
  std::ostringstream detail;
  detail << "CART oracle x60 runs, MDI normalization, planted recovery, " << elapsed << "s";
  result.detail = check.ok ? detail.str() : check.log.str();
  return result;
}

// ---------------------------------------------------------------------------
// 5. RFE stub oracles and the evaluator-call budget.

CriterionResult crit_rfe(std::string* digest) {
  const auto start = Clock::now();
  Check check;
  Sha256 hash;

  const std::vector<std::uint64_t> seeds{2022, 2023, 2024};
  const std::vector<std::size_t> init{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::size_t n = init.size();
  const std::size_t budget = seeds.size() * n * (n - 1) / 2;

  struct StubCase {
    const char* name;
    std::unique_ptr<Evaluator> evaluator;
    std::size_t patience;
  };
  std::vector<StubCase> cases;
  cases.push_back(
      {"peaked", std::make_unique<PeakedEvaluator>(std::set<std::size_t>{0, 1, 2, 3, 4, 5, 6}),
       2});
  cases.push_back({"monotone", std::make_unique<SubsetSizeEvaluator>(10.0), 3});
  cases.push_back({"constant", std::make_unique<ConstantEvaluator>(0.5), 4});

  for (auto& c : cases) {
    CountingEvaluator counter(*c.evaluator);
    RfeOptions options;
    options.patience = c.patience;
    options.seeds = seeds;
    const auto [selected, trace] = run_rfe(counter, init, options);

    const auto oracle_result = oracle::greedy_rfe(
        [&](const std::vector<std::size_t>& subset) { return c.evaluator->score(subset, 0); },
        init, c.patience);
    check.expect(selected == oracle_result.selected,
                 std::string(c.name) + ": selected subset differs from the greedy oracle");
    check.expect(trace.rm_list == oracle_result.removed,
                 std::string(c.name) + ": removal order differs from the greedy oracle");
    check.expect(std::abs(trace.best_performance - oracle_result.best) < 1e-15,
                 std::string(c.name) + ": best performance differs");

    check.expect(counter.calls() <= budget,
                 std::string(c.name) + ": evaluator calls " + std::to_string(counter.calls()) +
                     " exceed |seeds|*n(n-1)/2 = " + std::to_string(budget));

    // identical traces on a rerun
    const auto second = run_rfe(*c.evaluator, init, options);
    const std::vector<std::string> no_names;
    check.expect(trace_to_json(trace, no_names) == trace_to_json(second.second, no_names),
                 std::string(c.name) + ": rerun trace differs");
    hash.update(trace_to_json(trace, no_names));
  }

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s >= 5s");
  if (digest) *digest = hash.hex_digest();

  CriterionResult result;
  result.passed = check.ok;
  result.detail = check.ok
                      ? "3 stubs match the greedy oracle; call budget respected; traces stable"
                      : check.log.str();
  return result;
}

// ---------------------------------------------------------------------------
// UNSW-NB15 helpers (criteria 6, 7, 9).

std::string unsw_dir() {
  if (const char* env = std::getenv("IGRF_UNSW_DIR")) {
    if (fs::exists(fs::path(env) / "UNSW_NB15_training-set.csv")) return env;
    return "";
  }
  for (const char* candidate : {"data", "../data", "tests/data/unsw"}) {
    if (fs::exists(fs::path(candidate) / "UNSW_NB15_training-set.csv")) return candidate;
  }
  return "";
}

PipelineConfig unsw_config(const std::string& dir, const std::string& out_dir) {
  PipelineConfig c = default_pipeline_config();
  c.data.train_csv = (fs::path(dir) / "UNSW_NB15_training-set.csv").string();
  c.data.test_csv = (fs::path(dir) / "UNSW_NB15_testing-set.csv").string();
  c.data.ignore = {"id"};
  c.data.classes = {"Normal",         "Generic",  "Exploits", "Fuzzers",   "DoS",
                    "Reconnaissance", "Analysis", "Backdoor", "Shellcode", "Worms"};
  c.out_dir = out_dir;
  return c;
}

CriterionResult skip_no_data() {
  CriterionResult r;
  r.skipped = true;
  r.detail = "UNSW-NB15 10% CSVs not found (set IGRF_UNSW_DIR or place them under data/)";
  return r;
}

// 6. Preprocessing reproduction on the real dataset.

CriterionResult crit_unsw_preprocess(std::string*) {
  const std::string dir = unsw_dir();
  if (dir.empty()) return skip_no_data();

  Check check;
  const PipelineConfig config = unsw_config(dir, "unsw_out");
  Schema schema = schema_from_csv_header(config.data.train_csv, config.data);
  const Table train_raw = load_csv(config.data.train_csv, schema, config.data.ignore);
  const Table test_raw = load_csv(config.data.test_csv, train_raw.schema, config.data.ignore);

  check.expect(train_raw.row_count == 175341,
               "training file has " + std::to_string(train_raw.row_count) +
                   " rows, expected 175341");
  check.expect(test_raw.row_count == 82332,
               "test file has " + std::to_string(test_raw.row_count) + " rows, expected 82332");
  check.expect(train_raw.schema.label_classes.size() == 10, "expected 10 classes");

  const Table train_clean = clean(train_raw);
  const Table test_clean = clean(test_raw);
  const std::size_t removed =
      (train_raw.row_count - train_clean.row_count) + (test_raw.row_count - test_clean.row_count);
  check.expect(removed == 44,
               "cleaning removed " + std::to_string(removed) + " rows, expected 44");

  const Table train_major = remove_minority(train_clean, config.data.drop_classes);
  const Table test_major = remove_minority(test_clean, config.data.drop_classes);
  const Table train_over = oversample(train_major, "Normal", 2);
  const auto [val_table, test_table] = split_holdout(test_major, 0.5, config.data.split_seed);

  const std::map<std::string, std::size_t> expected_train{
      {"Normal", 112000}, {"Generic", 40000}, {"Exploits", 33393},
      {"Fuzzers", 18184}, {"DoS", 12264},     {"Reconnaissance", 10491}};
  const std::map<std::string, std::size_t> expected_val{
      {"Normal", 18500}, {"Generic", 9436}, {"Exploits", 5566},
      {"Fuzzers", 3031}, {"DoS", 2044},     {"Reconnaissance", 1748}};
  const std::map<std::string, std::size_t> expected_test{
      {"Normal", 18500}, {"Generic", 9435}, {"Exploits", 5566},
      {"Fuzzers", 3031}, {"DoS", 2045},     {"Reconnaissance", 1748}};

  const auto counts_of = [](const Table& t) {
    std::map<std::string, std::size_t> out;
    const auto counts = t.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) out[t.schema.label_classes[c]] = counts[c];
    }
    return out;
  };
  const auto compare = [&check](const std::map<std::string, std::size_t>& got,
                                const std::map<std::string, std::size_t>& want,
                                const std::string& which) {
    for (const auto& [name, expected_count] : want) {
      const auto it = got.find(name);
      const std::size_t actual = it == got.end() ? 0 : it->second;
      check.expect(actual == expected_count, which + " " + name + "=" + std::to_string(actual) +
                                                 " expected " + std::to_string(expected_count));
    }
  };
  compare(counts_of(train_over), expected_train, "train");
  compare(counts_of(val_table), expected_val, "validation");
  compare(counts_of(test_table), expected_test, "test");

  std::size_t normal = 0;
  for (auto l : train_over.labels) {
    if (train_over.schema.label_classes[static_cast<std::size_t>(l)] == "Normal") ++normal;
  }
  const double proportion =
      static_cast<double>(normal) / static_cast<double>(train_over.row_count);
  check.expect(std::abs(proportion - 0.4948) <= 0.001,
               "oversampled Normal proportion " + std::to_string(proportion));

  CriterionResult result;
  result.passed = check.ok;
  result.detail = check.ok ? "44 rows cleaned; class counts reproduce the published split"
                           : check.log.str();
  return result;
}

// 7. Stage-1 survivor counts (soft).

CriterionResult crit_unsw_stage1(std::string*) {
  const std::string dir = unsw_dir();
  if (dir.empty()) return skip_no_data();

  const PipelineConfig config = unsw_config(dir, "unsw_out");
  const PreprocessArtifacts artifacts = fs::exists(artifact_path(config, "encoded_meta.json"))
                                            ? load_preprocess_artifacts(config)
                                            : cmd_preprocess(config);

  const auto ig = rank_ig_features(config, artifacts);
  const auto rf = rank_rf_features(config, artifacts);
  const auto count_over = [](const std::vector<RankedFeature>& ranking, double tau) {
    std::size_t count = 0;
    for (const auto& r : ranking) {
      if (r.score > tau) ++count;
    }
    return count;
  };
  const std::size_t ig_survivors = count_over(ig, config.ig.threshold);
  const std::size_t rf_survivors = count_over(rf, config.rf.threshold);

  std::set<std::size_t> unioned;
  for (const auto& r : ig) {
    if (r.score > config.ig.threshold) unioned.insert(r.schema_column);
  }
  for (const auto& r : rf) {
    if (r.score > config.rf.threshold) unioned.insert(r.schema_column);
  }

  std::ostringstream summary;
  summary << "IG survivors " << ig_survivors << " (target 22 +/- 3), RF survivors "
          << rf_survivors << " (target 19 +/- 3), union " << unioned.size()
          << " (target 24 +/- 4)";

  fs::create_directories(config.out_dir);
  write_ranking_csv(artifact_path(config, "ig_ranking.csv"), ig, true);
  write_ranking_csv(artifact_path(config, "rf_ranking.csv"), rf, false);

  const bool in_tolerance = ig_survivors >= 19 && ig_survivors <= 25 && rf_survivors >= 16 &&
                            rf_survivors <= 22 && unioned.size() >= 20 && unioned.size() <= 28;

  CriterionResult result;
  result.passed = true;  // out-of-tolerance demands a written analysis, not a hard failure
  if (in_tolerance) {
    result.detail = summary.str();
  } else {
    const std::string analysis_path = artifact_path(config, "stage1_analysis.txt");
    std::ofstream analysis(analysis_path);
    analysis << summary.str() << "\n"
             << "Out-of-tolerance survivor counts. The published rankings used an unstated\n"
             << "discretization for continuous features and unstated forest depth and\n"
             << "feature-subsampling settings; this run used 10-bin equal-frequency bins,\n"
             << "unlimited depth, min_samples_split=2, ceil(sqrt(n)) features per split,\n"
             << "1000 trees, Gini impurity. Inspect ig_ranking.csv / rf_ranking.csv next to\n"
             << "this file for threshold sensitivity.\n";
    result.detail = summary.str() + " -- out of tolerance, analysis written to " + analysis_path;
  }
  return result;
}

// ---------------------------------------------------------------------------
// 8. End-to-end synthetic recovery.

void write_synthetic_recovery_dataset(const std::string& train_path, const std::string& test_path,
                                      std::uint64_t seed) {
  Rng rng(seed);
  // class means of the 5 informative features, roughly 1.5 sigma apart
  const double mu[3][5] = {{0.0, 0.0, 0.0, 0.0, 0.0},
                           {1.6, 1.2, -1.4, 0.8, -1.0},
                           {-1.2, 1.8, 1.0, -1.6, 0.6}};
  std::ostringstream train, test;
  std::ostringstream header;
  for (int f = 0; f < 20; ++f) header << "x" << f << ",";
  header << "label";
  train << header.str() << "\n";
  test << header.str() << "\n";

  for (int row = 0; row < 5000; ++row) {
    const auto cls = static_cast<std::size_t>(uniform_index(rng, 3));
    double informative[5];
    for (auto& v : informative) v = 0.0;
    for (int f = 0; f < 5; ++f) informative[f] = mu[cls][f] + test::gaussian(rng);
    std::ostringstream& out = row < 3500 ? train : test;
    for (int f = 0; f < 5; ++f) out << format_double(informative[f]) << ",";
    for (int f = 0; f < 5; ++f) out << format_double(informative[f]) << ",";  // exact duplicates
    for (int f = 0; f < 10; ++f) out << format_double(test::gaussian(rng)) << ",";
    out << "c" << cls << "\n";
  }
  test::write_file(train_path, train.str());
  test::write_file(test_path, test.str());
}

PipelineConfig synthetic_config(const std::string& train_csv, const std::string& test_csv,
                                const std::string& out_dir, std::uint64_t seed) {
  PipelineConfig c = default_pipeline_config();
  c.data.train_csv = train_csv;
  c.data.test_csv = test_csv;
  c.data.label = "label";
  c.data.binary_label = "";
  c.data.categorical.clear();
  c.data.drop_classes.clear();
  c.data.classes = {"c0", "c1", "c2"};
  c.data.oversample_factor = 1;
  c.data.split_ratio = 0.5;
  c.data.split_seed = seed;
  c.ig.bins = 10;
  c.ig.threshold = 0.25;
  c.rf.trees = 150;
  c.rf.threshold = 0.02;
  c.rf.seed = seed;
  c.rfe.patience = 3;
  c.rfe.seeds = {2022, 2023};
  c.rfe.epochs = 4;
  c.rfe.threads = 2;
  c.mlp.hidden_sizes = {16};
  c.mlp.learning_rate = 0.005;
  c.mlp.batch_size = 64;
  c.mlp.max_epochs = 12;
  c.mlp.early_stop_patience = 4;
  c.mlp.seed = seed;
  c.out_dir = out_dir;
  return c;
}

double subset_test_accuracy(const PipelineConfig& config, const PreprocessArtifacts& artifacts,
                            const std::vector<std::size_t>& subset, std::uint64_t seed) {
  const auto cols = subset_encoded_columns(artifacts.train, subset);
  PipelineConfig run = config;
  run.mlp.seed = seed;
  const MlpModel model = train_on_subset(run, artifacts, cols);
  return evaluate_on_test(artifacts, model, cols, run.mlp.loss).accuracy;
}

CriterionResult crit_synthetic_recovery(std::string* digest) {
  const auto start = Clock::now();
  Check check;

  // Fixed scratch location: a rerun sees byte-identical config and inputs,
  // which is what the determinism criterion compares.
  struct FixedDir {
    fs::path path;
    explicit FixedDir(const char* name) : path(fs::temp_directory_path() / name) {
      std::error_code ec;
      fs::remove_all(path, ec);
      fs::create_directories(path);
    }
    ~FixedDir() {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
  } dir("igrf_acceptance_8");

  write_synthetic_recovery_dataset(dir.file("train.csv"), dir.file("test.csv"), 2022);
  const PipelineConfig config =
      synthetic_config(dir.file("train.csv"), dir.file("test.csv"), dir.file("out"), 2022);

  cmd_pipeline(config, SelectMode::igrf_rfe);

  const std::string selection_bytes =
      test::read_file(artifact_path(config, "selected_subset.json"));
  if (digest) {
    *digest =
        sha256_hex(test::read_file(artifact_path(config, "manifest.json")) + selection_bytes);
  }

  const auto selection = nlohmann::json::parse(selection_bytes);
  std::set<std::string> selected;
  for (const auto& name : selection.at("retained")) selected.insert(name.get<std::string>());

  // every signal group {x_i, x_{i+5}} keeps at least one member
  for (int i = 0; i < 5; ++i) {
    const std::string a = "x" + std::to_string(i);
    const std::string b = "x" + std::to_string(i + 5);
    check.expect(selected.count(a) || selected.count(b),
                 "signal group " + a + "/" + b + " lost entirely");
  }
  // at most 2 noise features
  std::size_t noise = 0;
  for (int i = 10; i < 20; ++i) noise += selected.count("x" + std::to_string(i));
  check.expect(noise <= 2, "selected " + std::to_string(noise) + " noise features (> 2)");

  // accuracy with the selected subset stays within 0.5pt of all features,
  // averaged over 5 seeds
  const PreprocessArtifacts artifacts = load_preprocess_artifacts(config);
  std::vector<std::size_t> selected_ids;
  for (const auto& id : selection.at("retained_ids")) selected_ids.push_back(id.get<std::size_t>());
  const std::vector<std::size_t> all_ids = artifacts.schema.feature_columns();

  double mean_selected = 0.0, mean_all = 0.0;
  for (std::uint64_t seed = 2022; seed <= 2026; ++seed) {
    mean_selected += subset_test_accuracy(config, artifacts, selected_ids, seed);
    mean_all += subset_test_accuracy(config, artifacts, all_ids, seed);
  }
  mean_selected /= 5.0;
  mean_all /= 5.0;
  check.expect(mean_selected >= mean_all - 0.005,
               "selected-subset accuracy " + std::to_string(mean_selected) +
                   " fell more than 0.5pt below all-features " + std::to_string(mean_all));

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 600.0, "runtime " + std::to_string(elapsed) + "s >= 10min");

  CriterionResult result;
  result.passed = check.ok;
  std::ostringstream detail;
  detail << "selected " << selected.size() << " features, " << noise
         << " noise; acc(selected) " << mean_selected << " vs acc(all) " << mean_all << ", "
         << elapsed << "s";
  result.detail = check.ok ? detail.str() : check.log.str() + " [" + detail.str() + "]";
  return result;
}

// ---------------------------------------------------------------------------
// 9. Paper-scale headline reproduction (opt-in, hours).

CriterionResult crit_unsw_headline(std::string*) {
  const std::string dir = unsw_dir();
  if (dir.empty()) return skip_no_data();
  if (std::getenv("IGRF_RUN_FULL") == nullptr) {
    CriterionResult r;
    r.skipped = true;
    r.detail = "long-running headline reproduction is opt-in: set IGRF_RUN_FULL=1 "
               "(IGRF_RFE_EPOCHS can bound the wrapper-stage epoch budget)";
    return r;
  }

  Check check;
  PipelineConfig config = unsw_config(dir, "unsw_out_full");
  cmd_pipeline(config, SelectMode::igrf_rfe);
  const auto report = nlohmann::json::parse(
      test::read_file(artifact_path(config, "eval_report.json")));
  const double accuracy = report.at("accuracy").get<double>();
  const double weighted_f1 = report.at("weighted").at("f1").get<double>();

  PipelineConfig baseline = unsw_config(dir, "unsw_out_baseline");
  cmd_pipeline(baseline, SelectMode::all_features);
  const auto baseline_report = nlohmann::json::parse(
      test::read_file(artifact_path(baseline, "eval_report.json")));
  const double baseline_accuracy = baseline_report.at("accuracy").get<double>();

  check.expect(std::abs(accuracy - 0.8424) <= 0.015,
               "accuracy " + std::to_string(accuracy) + " outside 84.24% +/- 1.5pt");
  check.expect(accuracy > baseline_accuracy,
               "selected-subset accuracy does not beat the all-features baseline " +
                   std::to_string(baseline_accuracy));
  check.expect(std::abs(weighted_f1 - 0.8285) <= 0.02,
               "weighted f1 " + std::to_string(weighted_f1) + " outside 82.85% +/- 2pt");

  CriterionResult result;
  result.passed = check.ok;
  std::ostringstream detail;
  detail << "accuracy " << accuracy << " (baseline " << baseline_accuracy << "), weighted f1 "
         << weighted_f1;
  result.detail = check.ok ? detail.str() : check.log.str() + " [" + detail.str() + "]";
  return result;
}

// ---------------------------------------------------------------------------
// 10. Determinism: criteria 1-5 and 8 rerun bit-identically.

CriterionResult crit_determinism(std::string*) {
  Check check;
  struct Entry {
    int criterion;
    CriterionResult (*fn)(std::string*);
  };
  const Entry entries[] = {{1, crit_metrics}, {2, crit_gradients}, {3, crit_info_gain},
                           {4, crit_forest},  {5, crit_rfe},       {8, crit_synthetic_recovery}};
  for (const auto& entry : entries) {
    std::string first, second;
    const auto a = entry.fn(&first);
    const auto b = entry.fn(&second);
    check.expect(a.passed && b.passed,
                 "criterion " + std::to_string(entry.criterion) + " failed during the rerun");
    check.expect(first == second && !first.empty(),
                 "criterion " + std::to_string(entry.criterion) + " rerun digest differs");
  }

  CriterionResult result;
  result.passed = check.ok;
  result.detail = check.ok ? "criteria 1-5 and 8 rerun with identical output digests"
                           : check.log.str();
  return result;
}

}  // namespace

const char* criterion_title(int n) {
  switch (n) {
    case 1: return "metric reports equal the brute-force oracle";
    case 2: return "analytic MLP gradients match finite differences";
    case 3: return "information-gain identities and bounds";
    case 4: return "forest equals exhaustive CART; MDI sane; planted recovery";
    case 5: return "RFE matches the greedy oracle within the call budget";
    case 6: return "UNSW-NB15 preprocessing reproduction (data-dependent)";
    case 7: return "UNSW-NB15 stage-1 survivor counts (data-dependent, soft)";
    case 8: return "end-to-end synthetic signal recovery";
    case 9: return "UNSW-NB15 headline accuracy reproduction (opt-in, long)";
    case 10: return "determinism: reruns are bit-identical";
  }
  return "?";
}

CriterionResult run_criterion(int n) {
  switch (n) {
    case 1: return crit_metrics(nullptr);
    case 2: return crit_gradients(nullptr);
    case 3: return crit_info_gain(nullptr);
    case 4: return crit_forest(nullptr);
    case 5: return crit_rfe(nullptr);
    case 6: return crit_unsw_preprocess(nullptr);
    case 7: return crit_unsw_stage1(nullptr);
    case 8: return crit_synthetic_recovery(nullptr);
    case 9: return crit_unsw_headline(nullptr);
    case 10: return crit_determinism(nullptr);
  }
  CriterionResult r;
  r.detail = "unknown criterion";
  return r;
}

}  // namespace igrf::acceptance
