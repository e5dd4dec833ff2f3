#include "igrf/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "igrf/csv.hpp"
#include "igrf/errors.hpp"
#include "igrf/info_gain.hpp"
#include "igrf/preprocess.hpp"
#include "igrf/random_forest.hpp"
#include "igrf/version.hpp"

namespace igrf {

namespace fs = std::filesystem;
using nlohmann::json;

SelectMode parse_select_mode(const std::string& name) {
  if (name == "igrf_rfe" || name == "igrf-rfe") return SelectMode::igrf_rfe;
  if (name == "ig_only" || name == "ig") return SelectMode::ig_only;
  if (name == "rf_only" || name == "rf") return SelectMode::rf_only;
  if (name == "union") return SelectMode::union_set;
  if (name == "intersection") return SelectMode::intersection;
  if (name == "all_features" || name == "all") return SelectMode::all_features;
  throw ConfigError("unknown selection mode: " + name);
}

std::string select_mode_name(SelectMode mode) {
  switch (mode) {
    case SelectMode::igrf_rfe: return "igrf_rfe";
    case SelectMode::ig_only: return "ig_only";
    case SelectMode::rf_only: return "rf_only";
    case SelectMode::union_set: return "union";
    case SelectMode::intersection: return "intersection";
    case SelectMode::all_features: return "all_features";
  }
  return "?";
}

std::string artifact_path(const PipelineConfig& config, const std::string& name) {
  return (fs::path(config.out_dir) / name).string();
}

namespace {

class StageTimer {
 public:
  StageTimer(const PipelineConfig& config, std::string stage)
      : stats_path_(artifact_path(config, "run_stats.txt")),
        stage_(std::move(stage)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    append_run_stats(stats_path_, stage_,
                     std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count());
  }

 private:
  std::string stats_path_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

RunManifest open_manifest(const PipelineConfig& config) {
  const std::string echo = config_echo(config);
  const std::string path = artifact_path(config, "manifest.json");
  if (fs::exists(path)) {
    try {
      RunManifest existing = RunManifest::load(path);
      // Accumulate stages only while the configuration is unchanged.
      if (existing.config_text() == echo && existing.version() == kVersion) return existing;
    } catch (const std::exception&) {
      // unreadable manifest: start fresh
    }
  }
  return RunManifest(kVersion, echo);
}

void save_manifest(const PipelineConfig& config, const RunManifest& m) {
  fs::create_directories(config.out_dir);
  m.save(artifact_path(config, "manifest.json"));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

double parse_double_exact(const std::string& s, const std::string& context) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError(context + ": bad number '" + s + "'");
  }
  return v;
}

std::map<std::string, std::size_t> named_class_counts(const Table& t) {
  std::map<std::string, std::size_t> out;
  const auto counts = t.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) out[t.schema.label_classes[c]] = counts[c];
  return out;
}

}  // namespace

Schema schema_from_csv_header(const std::string& path, const DataConfig& data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path);
  CsvReader reader(in);
  const auto header = reader.next_record();
  if (!header) throw DataError("empty CSV file (no header): " + path);

  const std::set<std::string> categorical(data.categorical.begin(), data.categorical.end());
  Schema schema;
  bool saw_label = false;
  std::set<std::string> categorical_seen;
  for (const auto& name : *header) {
    if (data.ignore.count(name)) continue;
    if (name == data.label) {
      schema.columns.push_back({name, ColumnKind::label});
      saw_label = true;
    } else if (categorical.count(name)) {
      schema.columns.push_back({name, ColumnKind::categorical});
      categorical_seen.insert(name);
    } else {
      schema.columns.push_back({name, ColumnKind::numeric});
    }
  }
  if (!saw_label) throw DataError(path + ": label column '" + data.label + "' not in header");
  // A misspelled categorical declaration would silently demote the real
  // column to numeric and clean() would then drop every row.
  for (const auto& name : categorical) {
    if (!categorical_seen.count(name)) {
      throw DataError(path + ": declared categorical column '" + name + "' not in header");
    }
  }
  schema.label_classes = data.classes;
  schema.validate();
  return schema;
}

PreprocessArtifacts run_preprocess(const PipelineConfig& config) {
  if (config.data.train_csv.empty() || config.data.test_csv.empty()) {
    throw ConfigError("[data] train and test CSV paths are required");
  }

  Schema schema = schema_from_csv_header(config.data.train_csv, config.data);
  Table train_raw = load_csv(config.data.train_csv, schema, config.data.ignore);
  // Pin the (possibly discovered) class order before loading the test set.
  Table test_raw = load_csv(config.data.test_csv, train_raw.schema, config.data.ignore);

  Table train_clean = clean(train_raw, config.data.binary_label);
  Table test_clean = clean(test_raw, config.data.binary_label);

  Table train_major = remove_minority(train_clean, config.data.drop_classes);
  Table test_major = remove_minority(test_clean, config.data.drop_classes);
  if (train_major.row_count == 0) throw DataError("no training rows survived preprocessing");
  if (test_major.row_count == 0) throw DataError("no test rows survived preprocessing");

  PreprocessArtifacts a;
  a.ranking_table = deduplicate(train_major);
  a.train_counts_raw = named_class_counts(train_major);

  Table train_final = config.data.oversample_factor > 1
                          ? oversample(train_major, config.data.oversample_class,
                                       config.data.oversample_factor)
                          : train_major;
  a.train_counts = named_class_counts(train_final);

  auto [val_table, test_table] =
      split_holdout(test_major, config.data.split_ratio, config.data.split_seed);
  a.val_counts = named_class_counts(val_table);
  a.test_counts = named_class_counts(test_table);

  a.schema = train_final.schema;
  EncodedMatrix enc_train = one_hot(train_final, train_final);
  EncodedMatrix enc_val = one_hot(val_table, train_final);
  EncodedMatrix enc_test = one_hot(test_table, train_final);

  a.scaler = MinMaxScaler::fit(enc_train);
  a.train = a.scaler.transform(enc_train, /*clip=*/false);
  a.val = a.scaler.transform(enc_val, /*clip=*/true);
  a.test = a.scaler.transform(enc_test, /*clip=*/true);
  return a;
}

namespace {

void write_encoded_csv(const std::string& path, const EncodedMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  std::vector<std::string> fields = m.feature_names;
  fields.push_back("label");
  write_csv_record(out, fields);
  for (std::size_t r = 0; r < m.values.rows; ++r) {
    fields.clear();
    const auto row = m.values.row(r);
    for (double v : row) fields.push_back(format_double(v));
    fields.push_back(m.class_names[static_cast<std::size_t>(m.labels[r])]);
    write_csv_record(out, fields);
  }
  if (!out) throw DataError("write failed: " + path);
}

EncodedMatrix read_encoded_csv(const std::string& path, const EncodedMatrix& layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  CsvReader reader(in);
  const auto header = reader.next_record();
  if (!header || header->size() != layout.feature_names.size() + 1 ||
      !std::equal(layout.feature_names.begin(), layout.feature_names.end(), header->begin()) ||
      header->back() != "label") {
    throw DataError(path + ": header does not match the encoded layout");
  }

  EncodedMatrix m = layout;  // copies names/groups/classes
  m.labels.clear();
  std::vector<double> values;
  std::size_t rows = 0;
  std::map<std::string, std::int32_t> class_index;
  for (std::size_t c = 0; c < m.class_names.size(); ++c) {
    class_index[m.class_names[c]] = static_cast<std::int32_t>(c);
  }
  while (auto record = reader.next_record()) {
    if (record->size() == 1 && (*record)[0].empty()) continue;
    if (record->size() != header->size()) throw DataError(path + ": ragged row");
    for (std::size_t i = 0; i + 1 < record->size(); ++i) {
      values.push_back(parse_double_exact((*record)[i], path));
    }
    const auto it = class_index.find(record->back());
    if (it == class_index.end()) throw DataError(path + ": unknown class " + record->back());
    m.labels.push_back(it->second);
    ++rows;
  }
  m.values = Matrix(rows, layout.feature_names.size());
  m.values.data = std::move(values);
  return m;
}

json schema_to_json(const Schema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) {
    const char* kind = c.kind == ColumnKind::numeric      ? "numeric"
                       : c.kind == ColumnKind::categorical ? "categorical"
                                                           : "label";
    cols.push_back({{"name", c.name}, {"kind", kind}});
  }
  return {{"columns", cols}, {"classes", schema.label_classes}};
}

Schema schema_from_json(const json& j) {
  Schema schema;
  for (const auto& c : j.at("columns")) {
    const std::string kind = c.at("kind").get<std::string>();
    ColumnKind k = kind == "numeric"      ? ColumnKind::numeric
                   : kind == "categorical" ? ColumnKind::categorical
                                           : ColumnKind::label;
    schema.columns.push_back({c.at("name").get<std::string>(), k});
  }
  schema.label_classes = j.at("classes").get<std::vector<std::string>>();
  schema.validate();
  return schema;
}

}  // namespace

void write_preprocess_artifacts(const PipelineConfig& config, const PreprocessArtifacts& a,
                                RunManifest& manifest) {
  fs::create_directories(config.out_dir);

  const std::string ranking_path = artifact_path(config, "ranking.csv");
  export_csv(a.ranking_table, ranking_path);

  const std::string train_path = artifact_path(config, "train_encoded.csv");
  const std::string val_path = artifact_path(config, "val_encoded.csv");
  const std::string test_path = artifact_path(config, "test_encoded.csv");
  write_encoded_csv(train_path, a.train);
  write_encoded_csv(val_path, a.val);
  write_encoded_csv(test_path, a.test);

  json meta;
  meta["schema"] = schema_to_json(a.schema);
  meta["feature_names"] = a.train.feature_names;
  json groups = json::array();
  for (const auto& g : a.train.groups) {
    groups.push_back({{"name", g.name}, {"schema_column", g.schema_column}, {"columns", g.columns}});
  }
  meta["groups"] = std::move(groups);
  meta["scaler"] = {{"min", a.scaler.min}, {"max", a.scaler.max}};
  const std::string meta_path = artifact_path(config, "encoded_meta.json");
  write_text_file(meta_path, meta.dump(2) + "\n");

  // Class proportions before/after oversampling (training branch).
  const std::string proportions_path = artifact_path(config, "class_proportions.csv");
  {
    std::ofstream out(proportions_path, std::ios::binary);
    write_csv_record(out, {"class", "train_count", "train_proportion", "train_count_oversampled",
                           "train_proportion_oversampled"});
    double total_raw = 0, total_over = 0;
    for (const auto& [name, count] : a.train_counts_raw) total_raw += static_cast<double>(count);
    for (const auto& [name, count] : a.train_counts) total_over += static_cast<double>(count);
    for (const auto& [name, raw_count] : a.train_counts_raw) {
      const std::size_t over_count = a.train_counts.at(name);
      write_csv_record(out, {name, std::to_string(raw_count),
                             format_double(static_cast<double>(raw_count) / total_raw),
                             std::to_string(over_count),
                             format_double(static_cast<double>(over_count) / total_over)});
    }
  }

  manifest.record_stage("preprocess", {config.data.train_csv, config.data.test_csv},
                        {ranking_path, train_path, val_path, test_path, meta_path,
                         proportions_path});
  manifest.record_counts("preprocess", "train_class_counts", a.train_counts);
  manifest.record_counts("preprocess", "train_class_counts_before_oversample",
                         a.train_counts_raw);
  manifest.record_counts("preprocess", "val_class_counts", a.val_counts);
  manifest.record_counts("preprocess", "test_class_counts", a.test_counts);
}

PreprocessArtifacts load_preprocess_artifacts(const PipelineConfig& config) {
  const std::string meta_path = artifact_path(config, "encoded_meta.json");
  if (!fs::exists(meta_path)) {
    throw DataError("preprocess artifacts not found in " + config.out_dir +
                    " (run the preprocess stage first)");
  }
  const json meta = json::parse(read_text_file(meta_path));

  PreprocessArtifacts a;
  a.schema = schema_from_json(meta.at("schema"));

  EncodedMatrix layout;
  layout.feature_names = meta.at("feature_names").get<std::vector<std::string>>();
  layout.class_names = a.schema.label_classes;
  for (const auto& g : meta.at("groups")) {
    layout.groups.push_back({g.at("name").get<std::string>(),
                             g.at("schema_column").get<std::size_t>(),
                             g.at("columns").get<std::vector<std::size_t>>()});
  }
  a.scaler.min = meta.at("scaler").at("min").get<std::vector<double>>();
  a.scaler.max = meta.at("scaler").at("max").get<std::vector<double>>();

  a.ranking_table = load_csv(artifact_path(config, "ranking.csv"), a.schema);
  a.train = read_encoded_csv(artifact_path(config, "train_encoded.csv"), layout);
  a.val = read_encoded_csv(artifact_path(config, "val_encoded.csv"), layout);
  a.test = read_encoded_csv(artifact_path(config, "test_encoded.csv"), layout);
  return a;
}

std::vector<RankedFeature> rank_ig_features(const PipelineConfig& config,
                                            const PreprocessArtifacts& a) {
  Discretizer d{config.ig.bins};
  const auto scores = rank_ig(a.ranking_table, d);
  std::vector<RankedFeature> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back({s.feature, s.name, s.normalized, s.raw_ig});
  return out;
}

std::vector<RankedFeature> rank_rf_features(const PipelineConfig& config,
                                            const PreprocessArtifacts& a) {
  const Table& t = a.ranking_table;
  const auto numeric_cols = t.schema.numeric_columns();
  if (numeric_cols.empty()) throw DataError("rank-rf: no numeric features");

  Matrix x(t.row_count, numeric_cols.size());
  for (std::size_t j = 0; j < numeric_cols.size(); ++j) {
    const auto& col = t.numeric[t.numeric_slot(numeric_cols[j])];
    for (std::size_t r = 0; r < t.row_count; ++r) x(r, j) = col[r];
  }

  ForestConfig fc;
  fc.n_trees = config.rf.trees;
  fc.max_depth = config.rf.max_depth;
  fc.min_samples_split = config.rf.min_samples_split;
  fc.features_per_split = config.rf.features_per_split;
  fc.seed = config.rf.seed;
  fc.n_threads = config.rf.threads;

  const Forest forest = fit_forest(x, t.labels, t.schema.label_classes.size(), fc);
  const auto scores = importance(forest);

  std::vector<RankedFeature> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    const std::size_t col = numeric_cols[s.feature];
    out.push_back({col, t.schema.columns[col].name, s.mdi, 0.0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedFeature& l, const RankedFeature& r) { return l.score > r.score; });
  return out;
}

void write_ranking_csv(const std::string& path, const std::vector<RankedFeature>& ranking,
                       bool with_raw) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  if (with_raw) {
    write_csv_record(out, {"feature", "raw_ig", "normalized"});
    for (const auto& r : ranking) {
      write_csv_record(out, {r.name, format_double(r.raw), format_double(r.score)});
    }
  } else {
    write_csv_record(out, {"feature", "mdi"});
    for (const auto& r : ranking) write_csv_record(out, {r.name, format_double(r.score)});
  }
}

std::vector<RankedFeature> read_ranking_csv(const std::string& path, const Schema& schema,
                                            bool with_raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ranking file: " + path);
  CsvReader reader(in);
  const auto header = reader.next_record();
  if (!header) throw DataError(path + ": empty ranking file");

  std::vector<RankedFeature> out;
  while (auto record = reader.next_record()) {
    if (record->size() == 1 && (*record)[0].empty()) continue;
    const std::string& name = (*record)[0];
    const auto col = schema.index_of(name);
    if (!col) throw DataError(path + ": unknown feature " + name);
    RankedFeature f;
    f.schema_column = *col;
    f.name = name;
    if (with_raw) {
      f.raw = parse_double_exact((*record)[1], path);
      f.score = parse_double_exact((*record)[2], path);
    } else {
      f.score = parse_double_exact((*record)[1], path);
    }
    out.push_back(std::move(f));
  }
  return out;
}

MlpEvaluator::MlpEvaluator(MlpConfig mlp, std::size_t epoch_budget, const EncodedMatrix& train,
                           const EncodedMatrix& val)
    : mlp_(std::move(mlp)), train_(train), val_(val) {
  if (epoch_budget > 0) mlp_.max_epochs = epoch_budget;
}

std::vector<std::size_t> MlpEvaluator::encoded_columns(
    const std::vector<std::size_t>& subset) const {
  return subset_encoded_columns(train_, subset);
}

std::vector<std::size_t> subset_encoded_columns(const EncodedMatrix& m,
                                                const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> cols;
  for (std::size_t id : sorted) {
    const EncodedGroup* g = m.group_by_schema_column(id);
    if (g == nullptr) throw DataError("subset refers to unknown feature id " + std::to_string(id));
    cols.insert(cols.end(), g->columns.begin(), g->columns.end());
  }
  return cols;
}

double MlpEvaluator::score(const std::vector<std::size_t>& subset, std::uint64_t seed) {
  const auto cols = encoded_columns(subset);
  const Matrix x_train = train_.values.select_columns(cols);
  const Matrix x_val = val_.values.select_columns(cols);
  MlpConfig cfg = mlp_;
  cfg.seed = seed;
  const MlpModel model =
      fit(cfg, x_train, train_.labels, x_val, val_.labels, train_.class_names.size());
  const auto predictions = predict(model, x_val);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == val_.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

namespace {

// Translates name tokens in a stub spec ("stub:peaked:sttl,proto") to schema
// column ids before handing the spec to the parser.
std::string resolve_stub_spec(const std::string& spec, const Schema& schema) {
  const auto second_colon = spec.find(':', 5);
  if (second_colon == std::string::npos) return spec;
  const std::string head = spec.substr(0, second_colon + 1);
  const std::string args = spec.substr(second_colon + 1);
  if (head != "stub:peaked:") return spec;

  std::string out = head;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= args.size()) {
    const auto comma = args.find(',', pos);
    std::string tok = args.substr(pos, comma == std::string::npos ? args.size() - pos : comma - pos);
    if (!tok.empty()) {
      const bool numeric_token =
          std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); });
      if (!numeric_token) {
        const auto col = schema.index_of(tok);
        if (!col) throw ConfigError("stub evaluator: unknown feature name " + tok);
        tok = std::to_string(*col);
      }
      if (!first) out += ",";
      out += tok;
      first = false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

SelectionResult run_select(const PipelineConfig& config, SelectMode mode,
                           const PreprocessArtifacts& a, RunManifest& manifest) {
  SelectionResult result;
  result.mode = mode;

  if (mode == SelectMode::all_features) {
    result.subset.retained = a.schema.feature_columns();
    result.subset.provenance.ig_threshold = config.ig.threshold;
    result.subset.provenance.rf_threshold = config.rf.threshold;
    result.subset.provenance.categorical_appended = a.schema.categorical_columns();
    result.subset.provenance.union_size = a.schema.numeric_columns().size();
    return result;
  }

  // Rankings: reuse the emitted CSVs when they exist, compute otherwise.
  const std::string ig_path = artifact_path(config, "ig_ranking.csv");
  const std::string rf_path = artifact_path(config, "rf_ranking.csv");
  std::vector<RankedFeature> ig_ranking, rf_ranking;
  const bool need_ig = mode != SelectMode::rf_only;
  const bool need_rf = mode != SelectMode::ig_only;
  if (need_ig) {
    if (fs::exists(ig_path)) {
      ig_ranking = read_ranking_csv(ig_path, a.schema, /*with_raw=*/true);
    } else {
      ig_ranking = rank_ig_features(config, a);
      fs::create_directories(config.out_dir);
      write_ranking_csv(ig_path, ig_ranking, /*with_raw=*/true);
      manifest.record_stage("rank_ig", {}, {ig_path});
    }
  }
  if (need_rf) {
    if (fs::exists(rf_path)) {
      rf_ranking = read_ranking_csv(rf_path, a.schema, /*with_raw=*/false);
    } else {
      rf_ranking = rank_rf_features(config, a);
      fs::create_directories(config.out_dir);
      write_ranking_csv(rf_path, rf_ranking, /*with_raw=*/false);
      manifest.record_stage("rank_rf", {}, {rf_path});
    }
  }

  const auto scored = [](const std::vector<RankedFeature>& ranking) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(ranking.size());
    for (const auto& r : ranking) out.emplace_back(r.schema_column, r.score);
    return out;
  };
  const std::vector<std::size_t> ig_set =
      need_ig ? apply_threshold(scored(ig_ranking), config.ig.threshold) : std::vector<std::size_t>{};
  const std::vector<std::size_t> rf_set =
      need_rf ? apply_threshold(scored(rf_ranking), config.rf.threshold) : std::vector<std::size_t>{};

  switch (mode) {
    case SelectMode::ig_only:
      result.subset = union_with_categoricals(ig_set, {}, a.schema, config.ig.threshold,
                                              config.rf.threshold);
      break;
    case SelectMode::rf_only:
      result.subset = union_with_categoricals({}, rf_set, a.schema, config.ig.threshold,
                                              config.rf.threshold);
      break;
    case SelectMode::intersection:
      result.subset = intersection_with_categoricals(ig_set, rf_set, a.schema, config.ig.threshold,
                                                     config.rf.threshold);
      break;
    case SelectMode::union_set:
    case SelectMode::igrf_rfe:
      result.subset = union_with_categoricals(ig_set, rf_set, a.schema, config.ig.threshold,
                                              config.rf.threshold);
      break;
    default:
      break;
  }

  const std::string filter_path = artifact_path(config, "filter_report.json");
  fs::create_directories(config.out_dir);
  write_text_file(filter_path, subset_report_json(result.subset, a.schema) + "\n");
  manifest.record_stage("filter", {}, {filter_path});

  if (mode == SelectMode::igrf_rfe) {
    if (result.subset.retained.empty()) {
      throw DataError("filter stage retained no features; nothing for the wrapper stage");
    }
    std::unique_ptr<Evaluator> stub;
    MlpEvaluator production(config.mlp, config.rfe.epochs, a.train, a.val);
    Evaluator* ev = &production;
    if (!config.evaluator.empty()) {
      stub = make_stub_evaluator(resolve_stub_spec(config.evaluator, a.schema));
      ev = stub.get();
    }

    RfeOptions options;
    options.patience = config.rfe.patience;
    options.seeds = config.rfe.seeds;
    options.n_threads = config.rfe.threads;
    auto [selected, trace] = run_rfe(*ev, result.subset.retained, options);
    result.subset.retained = selected;
    result.has_trace = true;
    result.trace = std::move(trace);

    std::vector<std::string> feature_names(a.schema.columns.size());
    for (std::size_t i = 0; i < a.schema.columns.size(); ++i) {
      feature_names[i] = a.schema.columns[i].name;
    }
    const std::string trace_path = artifact_path(config, "rfe_trace.json");
    write_text_file(trace_path, trace_to_json(result.trace, feature_names) + "\n");
    manifest.record_stage("rfe", {}, {trace_path});
  }

  return result;
}

namespace {

void write_selection(const PipelineConfig& config, const PreprocessArtifacts& a,
                     const SelectionResult& result, RunManifest& manifest) {
  json j;
  j["mode"] = select_mode_name(result.mode);
  std::vector<std::string> names;
  for (std::size_t id : result.subset.retained) names.push_back(a.schema.columns[id].name);
  j["retained"] = names;
  j["retained_ids"] = result.subset.retained;
  j["encoded_columns"] = subset_encoded_columns(a.train, result.subset.retained);
  const std::string path = artifact_path(config, "selected_subset.json");
  write_text_file(path, j.dump(2) + "\n");
  manifest.record_stage("select", {}, {path});
  manifest.record_features("select", "selected_features", names);
  manifest.record_value("select", "mode", select_mode_name(result.mode));
}

struct StoredSelection {
  std::string mode;
  std::vector<std::size_t> retained_ids;
  std::vector<std::size_t> encoded_columns;
};

StoredSelection read_selection(const PipelineConfig& config) {
  const std::string path = artifact_path(config, "selected_subset.json");
  if (!fs::exists(path)) {
    throw DataError("no selected subset in " + config.out_dir +
                    " (run a selection stage or pass --mode)");
  }
  const json j = json::parse(read_text_file(path));
  StoredSelection s;
  s.mode = j.at("mode").get<std::string>();
  s.retained_ids = j.at("retained_ids").get<std::vector<std::size_t>>();
  s.encoded_columns = j.at("encoded_columns").get<std::vector<std::size_t>>();
  return s;
}

}  // namespace

MlpModel train_on_subset(const PipelineConfig& config, const PreprocessArtifacts& a,
                         const std::vector<std::size_t>& encoded_columns) {
  if (encoded_columns.empty()) throw DataError("train: empty feature subset");
  const Matrix x_train = a.train.values.select_columns(encoded_columns);
  const Matrix x_val = a.val.values.select_columns(encoded_columns);
  try {
    return fit(config.mlp, x_train, a.train.labels, x_val, a.val.labels,
               a.schema.label_classes.size());
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " (seed " + std::to_string(config.mlp.seed) + ")");
  }
}

EvalReport evaluate_on_test(const PreprocessArtifacts& a, const MlpModel& model,
                            const std::vector<std::size_t>& encoded_columns, LossKind) {
  const Matrix x_test = a.test.values.select_columns(encoded_columns);
  const Matrix probabilities = predict_proba(model, x_test);
  std::vector<std::int32_t> predictions(probabilities.rows);
  for (std::size_t i = 0; i < probabilities.rows; ++i) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < probabilities.cols; ++j) {
      if (probabilities(i, j) > probabilities(i, arg)) arg = j;
    }
    predictions[i] = static_cast<std::int32_t>(arg);
  }
  EvalReport report =
      weighted_report(a.test.labels, predictions, a.schema.label_classes.size(), &probabilities);
  report.class_names = a.schema.label_classes;
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  json j;
  j["accuracy"] = report.accuracy;
  json classes = json::array();
  for (std::size_t c = 0; c < report.k; ++c) {
    json row;
    row["class"] = c < report.class_names.size() ? report.class_names[c] : std::to_string(c);
    row["precision"] = report.per_class[c].precision;
    row["recall"] = report.per_class[c].recall;
    row["f1"] = report.per_class[c].f1;
    row["fpr"] = report.per_class[c].fpr;
    row["support"] = report.support[c];
    if (c < report.roc.size() && !report.roc[c].points.empty()) {
      row["auc"] = report.roc[c].auc;
    }
    classes.push_back(std::move(row));
  }
  j["classes"] = std::move(classes);
  j["weighted"] = {{"precision", report.weighted.precision},
                   {"recall", report.weighted.recall},
                   {"f1", report.weighted.f1},
                   {"fpr", report.weighted.fpr}};
  return j.dump(2);
}

void write_eval_report(const PipelineConfig& config, const EvalReport& report) {
  fs::create_directories(config.out_dir);
  write_text_file(artifact_path(config, "eval_report.json"), eval_report_json(report) + "\n");

  {
    std::ofstream out(artifact_path(config, "confusion.csv"), std::ios::binary);
    std::vector<std::string> header{"true\\predicted"};
    for (std::size_t c = 0; c < report.k; ++c) {
      header.push_back(c < report.class_names.size() ? report.class_names[c] : std::to_string(c));
    }
    write_csv_record(out, header);
    for (std::size_t t = 0; t < report.k; ++t) {
      std::vector<std::string> row{header[t + 1]};
      for (std::size_t p = 0; p < report.k; ++p) row.push_back(std::to_string(report.cm.at(t, p)));
      write_csv_record(out, row);
    }
  }

  for (std::size_t c = 0; c < report.roc.size(); ++c) {
    if (report.roc[c].points.empty()) continue;
    const std::string name =
        c < report.class_names.size() ? report.class_names[c] : std::to_string(c);
    std::ofstream out(artifact_path(config, "roc_" + name + ".csv"), std::ios::binary);
    write_csv_record(out, {"fpr", "tpr"});
    for (const auto& p : report.roc[c].points) {
      write_csv_record(out, {format_double(p.fpr), format_double(p.tpr)});
    }
  }
}

PreprocessArtifacts cmd_preprocess(const PipelineConfig& config) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "preprocess");
  PreprocessArtifacts a = run_preprocess(config);
  write_preprocess_artifacts(config, a, manifest);
  save_manifest(config, manifest);
  return a;
}

std::vector<RankedFeature> cmd_rank_ig(const PipelineConfig& config) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "rank_ig");
  const PreprocessArtifacts a = load_preprocess_artifacts(config);
  auto ranking = rank_ig_features(config, a);
  const std::string path = artifact_path(config, "ig_ranking.csv");
  write_ranking_csv(path, ranking, /*with_raw=*/true);
  manifest.record_stage("rank_ig", {artifact_path(config, "ranking.csv")}, {path});
  save_manifest(config, manifest);
  return ranking;
}

std::vector<RankedFeature> cmd_rank_rf(const PipelineConfig& config) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "rank_rf");
  const PreprocessArtifacts a = load_preprocess_artifacts(config);
  auto ranking = rank_rf_features(config, a);
  const std::string path = artifact_path(config, "rf_ranking.csv");
  write_ranking_csv(path, ranking, /*with_raw=*/false);
  manifest.record_stage("rank_rf", {artifact_path(config, "ranking.csv")}, {path});
  save_manifest(config, manifest);
  return ranking;
}

SelectionResult cmd_select(const PipelineConfig& config, SelectMode mode) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "select:" + select_mode_name(mode));
  const PreprocessArtifacts a = load_preprocess_artifacts(config);
  SelectionResult result = run_select(config, mode, a, manifest);
  write_selection(config, a, result, manifest);
  save_manifest(config, manifest);
  return result;
}

TrainEvalResult cmd_train(const PipelineConfig& config) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "train");
  const PreprocessArtifacts a = load_preprocess_artifacts(config);
  const StoredSelection selection = read_selection(config);

  TrainEvalResult result;
  result.encoded_columns = selection.encoded_columns;
  result.model = train_on_subset(config, a, selection.encoded_columns);
  const std::string model_path = artifact_path(config, "model.json");
  write_text_file(model_path, save_model_json(result.model) + "\n");
  manifest.record_stage("train", {artifact_path(config, "selected_subset.json")}, {model_path});
  save_manifest(config, manifest);

  result.report = evaluate_on_test(a, result.model, selection.encoded_columns, config.mlp.loss);
  return result;
}

EvalReport cmd_evaluate(const PipelineConfig& config) {
  RunManifest manifest = open_manifest(config);
  StageTimer timer(config, "evaluate");
  const PreprocessArtifacts a = load_preprocess_artifacts(config);
  const StoredSelection selection = read_selection(config);
  const std::string model_path = artifact_path(config, "model.json");
  if (!fs::exists(model_path)) {
    throw DataError("no trained model in " + config.out_dir + " (run train first)");
  }
  const MlpModel model = load_model_json(read_text_file(model_path));
  EvalReport report = evaluate_on_test(a, model, selection.encoded_columns, config.mlp.loss);
  write_eval_report(config, report);

  std::vector<std::string> outputs{artifact_path(config, "eval_report.json"),
                                   artifact_path(config, "confusion.csv")};
  manifest.record_stage("evaluate", {model_path}, outputs);
  save_manifest(config, manifest);
  return report;
}

void cmd_pipeline(const PipelineConfig& config, SelectMode mode) {
  RunManifest manifest = open_manifest(config);
  PreprocessArtifacts a;
  {
    StageTimer timer(config, "preprocess");
    a = run_preprocess(config);
    write_preprocess_artifacts(config, a, manifest);
  }
  {
    StageTimer timer(config, "rank_ig");
    const auto ranking = rank_ig_features(config, a);
    const std::string path = artifact_path(config, "ig_ranking.csv");
    write_ranking_csv(path, ranking, /*with_raw=*/true);
    manifest.record_stage("rank_ig", {}, {path});
  }
  {
    StageTimer timer(config, "rank_rf");
    const auto ranking = rank_rf_features(config, a);
    const std::string path = artifact_path(config, "rf_ranking.csv");
    write_ranking_csv(path, ranking, /*with_raw=*/false);
    manifest.record_stage("rank_rf", {}, {path});
  }
  SelectionResult selection;
  {
    StageTimer timer(config, "select");
    selection = run_select(config, mode, a, manifest);
    write_selection(config, a, selection, manifest);
  }
  {
    StageTimer timer(config, "train+evaluate");
    const auto encoded_columns = subset_encoded_columns(a.train, selection.subset.retained);
    const MlpModel model = train_on_subset(config, a, encoded_columns);
    write_text_file(artifact_path(config, "model.json"), save_model_json(model) + "\n");
    const EvalReport report = evaluate_on_test(a, model, encoded_columns, config.mlp.loss);
    write_eval_report(config, report);
    manifest.record_stage("train", {artifact_path(config, "selected_subset.json")},
                          {artifact_path(config, "model.json")});
    manifest.record_stage("evaluate", {artifact_path(config, "model.json")},
                          {artifact_path(config, "eval_report.json"),
                           artifact_path(config, "confusion.csv")});
  }
  save_manifest(config, manifest);
}

std::string cmd_report(const PipelineConfig& config) {
  std::ostringstream out;
  const std::string report_path = artifact_path(config, "eval_report.json");
  const std::string selection_path = artifact_path(config, "selected_subset.json");

  if (fs::exists(selection_path)) {
    const json sel = json::parse(read_text_file(selection_path));
    out << "selection mode: " << sel.at("mode").get<std::string>() << "\n";
    out << "selected features (" << sel.at("retained").size() << "):";
    for (const auto& name : sel.at("retained")) out << " " << name.get<std::string>();
    out << "\n\n";
  }
  if (!fs::exists(report_path)) {
    out << "no evaluation report in " << config.out_dir << "\n";
    return out.str();
  }
  const json j = json::parse(read_text_file(report_path));
  out << "accuracy: " << j.at("accuracy").get<double>() << "\n\n";
  out << "class            precision  recall     f1         fpr        auc\n";
  const auto fmt = [](double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    s << v;
    std::string text = s.str();
    text.resize(10, ' ');
    return text + " ";
  };
  for (const auto& row : j.at("classes")) {
    std::string name = row.at("class").get<std::string>();
    name.resize(16, ' ');
    out << name << " " << fmt(row.at("precision").get<double>())
        << fmt(row.at("recall").get<double>()) << fmt(row.at("f1").get<double>())
        << fmt(row.at("fpr").get<double>());
    if (row.contains("auc")) out << fmt(row.at("auc").get<double>());
    out << "\n";
  }
  const auto& w = j.at("weighted");
  out << "weighted avg.    " << fmt(w.at("precision").get<double>())
      << fmt(w.at("recall").get<double>()) << fmt(w.at("f1").get<double>())
      << fmt(w.at("fpr").get<double>()) << "\n";
  return out.str();
}

}  // namespace igrf
