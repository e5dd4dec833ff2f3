#include "igrf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "igrf/errors.hpp"

namespace igrf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  SectionMap out;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": key outside any [section]");
    }
    out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

class ConfigReader {
 public:
  explicit ConfigReader(SectionMap file) : file_(std::move(file)) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    used_[section].insert(key);
    const std::string env_name = "IGRF_" + upper(section) + "_" + upper(key);
    if (const char* env = std::getenv(env_name.c_str())) return std::string(env);
    const auto sec = file_.find(section);
    if (sec != file_.end()) {
      const auto it = sec->second.find(key);
      if (it != sec->second.end()) return it->second;
    }
    return std::nullopt;
  }

  void get(const std::string& s, const std::string& k, std::string& out) {
    if (auto v = raw(s, k)) out = *v;
  }
  void get(const std::string& s, const std::string& k, double& out) {
    if (auto v = raw(s, k)) out = parse_double(s, k, *v);
  }
  void get(const std::string& s, const std::string& k, std::uint64_t& out) {
    if (auto v = raw(s, k)) out = parse_unsigned(s, k, *v);
  }
  void get(const std::string& s, const std::string& k, std::vector<std::string>& out) {
    if (auto v = raw(s, k)) out = split_list(*v);
  }
  void get(const std::string& s, const std::string& k, std::set<std::string>& out) {
    if (auto v = raw(s, k)) {
      const auto items = split_list(*v);
      out = std::set<std::string>(items.begin(), items.end());
    }
  }

  /// "2022-2031" (inclusive range) or a comma list.
  void get_seeds(const std::string& s, const std::string& k, std::vector<std::uint64_t>& out) {
    const auto v = raw(s, k);
    if (!v) return;
    out.clear();
    const auto dash = v->find('-');
    if (dash != std::string::npos && v->find(',') == std::string::npos) {
      const std::uint64_t lo = parse_unsigned(s, k, trim(v->substr(0, dash)));
      const std::uint64_t hi = parse_unsigned(s, k, trim(v->substr(dash + 1)));
      if (hi < lo) throw ConfigError("seed range is reversed: " + *v);
      for (std::uint64_t x = lo; x <= hi; ++x) out.push_back(x);
    } else {
      for (const auto& tok : split_list(*v)) out.push_back(parse_unsigned(s, k, tok));
    }
    if (out.empty()) throw ConfigError("empty seed list for [" + s + "] " + k);
  }

  void get_sizes(const std::string& s, const std::string& k, std::vector<std::size_t>& out) {
    const auto v = raw(s, k);
    if (!v) return;
    out.clear();
    for (const auto& tok : split_list(*v)) out.push_back(parse_unsigned(s, k, tok));
  }

  /// Every file key must have been consumed by a get(); anything left is a typo.
  void reject_unknown(const std::string& path) const {
    for (const auto& [section, keys] : file_) {
      const auto used = used_.find(section);
      for (const auto& [key, value] : keys) {
        (void)value;
        if (used == used_.end() || !used->second.count(key)) {
          throw ConfigError(path + ": unknown key [" + section + "] " + key);
        }
      }
    }
  }

 private:
  static std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
      const auto comma = v.find(',', pos);
      const std::string tok =
          trim(v.substr(pos, comma == std::string::npos ? v.size() - pos : comma - pos));
      if (!tok.empty()) out.push_back(tok);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  static double parse_double(const std::string& s, const std::string& k, const std::string& v) {
    double out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      throw ConfigError("bad number for [" + s + "] " + k + ": '" + v + "'");
    }
    return out;
  }

  static std::uint64_t parse_unsigned(const std::string& s, const std::string& k,
                                      const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      throw ConfigError("bad unsigned integer for [" + s + "] " + k + ": '" + v + "'");
    }
    return out;
  }

  SectionMap file_;
  std::map<std::string, std::set<std::string>> used_;
};

PipelineConfig read_config(ConfigReader& r) {
  PipelineConfig c;
  r.get("data", "train", c.data.train_csv);
  r.get("data", "test", c.data.test_csv);
  r.get("data", "label", c.data.label);
  r.get("data", "binary_label", c.data.binary_label);
  r.get("data", "categorical", c.data.categorical);
  r.get("data", "classes", c.data.classes);
  r.get("data", "ignore", c.data.ignore);
  r.get("data", "drop_classes", c.data.drop_classes);
  r.get("data", "oversample_class", c.data.oversample_class);
  r.get("data", "oversample_factor", c.data.oversample_factor);
  r.get("data", "split_ratio", c.data.split_ratio);
  r.get("data", "split_seed", c.data.split_seed);

  r.get("ig", "bins", c.ig.bins);
  r.get("ig", "threshold", c.ig.threshold);

  r.get("rf", "trees", c.rf.trees);
  r.get("rf", "threshold", c.rf.threshold);
  r.get("rf", "seed", c.rf.seed);
  r.get("rf", "max_depth", c.rf.max_depth);
  r.get("rf", "min_samples_split", c.rf.min_samples_split);
  r.get("rf", "features_per_split", c.rf.features_per_split);
  r.get("rf", "threads", c.rf.threads);

  r.get("rfe", "patience", c.rfe.patience);
  r.get_seeds("rfe", "seeds", c.rfe.seeds);
  r.get("rfe", "epochs", c.rfe.epochs);
  r.get("rfe", "threads", c.rfe.threads);

  r.get_sizes("mlp", "hidden", c.mlp.hidden_sizes);
  r.get("mlp", "learning_rate", c.mlp.learning_rate);
  r.get("mlp", "batch_size", c.mlp.batch_size);
  r.get("mlp", "max_epochs", c.mlp.max_epochs);
  r.get("mlp", "patience", c.mlp.early_stop_patience);
  std::string loss_name = c.mlp.loss == LossKind::cross_entropy ? "cross_entropy" : "squared_error";
  r.get("mlp", "loss", loss_name);
  if (loss_name == "cross_entropy") c.mlp.loss = LossKind::cross_entropy;
  else if (loss_name == "squared_error") c.mlp.loss = LossKind::squared_error;
  else throw ConfigError("unknown loss kind: " + loss_name);
  r.get("mlp", "seed", c.mlp.seed);
  r.get("mlp", "bn_epsilon", c.mlp.bn_epsilon);
  r.get("mlp", "bn_momentum", c.mlp.bn_momentum);

  r.get("out", "dir", c.out_dir);
  r.get("out", "evaluator", c.evaluator);

  if (c.mlp.hidden_sizes.empty()) throw ConfigError("[mlp] hidden must list at least one layer");
  if (!(c.data.split_ratio > 0.0 && c.data.split_ratio < 1.0)) {
    throw ConfigError("[data] split_ratio must be in (0, 1)");
  }
  if (c.data.oversample_factor == 0) throw ConfigError("[data] oversample_factor must be >= 1");
  if (c.ig.bins < 2) throw ConfigError("[ig] bins must be >= 2");
  if (c.rf.trees == 0) throw ConfigError("[rf] trees must be >= 1");
  if (c.rfe.patience == 0) throw ConfigError("[rfe] patience must be >= 1");
  if (!(c.mlp.learning_rate > 0.0)) throw ConfigError("[mlp] learning_rate must be positive");
  if (c.mlp.batch_size == 0) throw ConfigError("[mlp] batch_size must be >= 1");
  if (c.mlp.max_epochs == 0) throw ConfigError("[mlp] max_epochs must be >= 1");
  if (c.mlp.early_stop_patience == 0) throw ConfigError("[mlp] patience must be >= 1");
  if (!(c.mlp.bn_epsilon > 0.0)) throw ConfigError("[mlp] bn_epsilon must be positive");
  return c;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  ConfigReader reader(parse_ini(path));
  PipelineConfig c = read_config(reader);
  reader.reject_unknown(path);
  return c;
}

PipelineConfig default_pipeline_config() {
  ConfigReader reader({});
  return read_config(reader);
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += v[i];
  }
  return out;
}

std::string join_set(const std::set<std::string>& v) {
  return join(std::vector<std::string>(v.begin(), v.end()));
}

}  // namespace

std::string config_echo(const PipelineConfig& c) {
  std::ostringstream out;
  out << "[data]\n";
  out << "train = " << c.data.train_csv << "\n";
  out << "test = " << c.data.test_csv << "\n";
  out << "label = " << c.data.label << "\n";
  out << "binary_label = " << c.data.binary_label << "\n";
  out << "categorical = " << join(c.data.categorical) << "\n";
  out << "classes = " << join(c.data.classes) << "\n";
  out << "ignore = " << join_set(c.data.ignore) << "\n";
  out << "drop_classes = " << join_set(c.data.drop_classes) << "\n";
  out << "oversample_class = " << c.data.oversample_class << "\n";
  out << "oversample_factor = " << c.data.oversample_factor << "\n";
  out << "split_ratio = " << c.data.split_ratio << "\n";
  out << "split_seed = " << c.data.split_seed << "\n";
  out << "[ig]\n";
  out << "bins = " << c.ig.bins << "\n";
  out << "threshold = " << c.ig.threshold << "\n";
  out << "[rf]\n";
  out << "trees = " << c.rf.trees << "\n";
  out << "threshold = " << c.rf.threshold << "\n";
  out << "seed = " << c.rf.seed << "\n";
  out << "max_depth = " << c.rf.max_depth << "\n";
  out << "min_samples_split = " << c.rf.min_samples_split << "\n";
  out << "features_per_split = " << c.rf.features_per_split << "\n";
  out << "threads = " << c.rf.threads << "\n";
  out << "[rfe]\n";
  out << "patience = " << c.rfe.patience << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < c.rfe.seeds.size(); ++i) {
    if (i > 0) out << ",";
    out << c.rfe.seeds[i];
  }
  out << "\n";
  out << "epochs = " << c.rfe.epochs << "\n";
  out << "threads = " << c.rfe.threads << "\n";
  out << "[mlp]\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < c.mlp.hidden_sizes.size(); ++i) {
    if (i > 0) out << ",";
    out << c.mlp.hidden_sizes[i];
  }
  out << "\n";
  out << "learning_rate = " << c.mlp.learning_rate << "\n";
  out << "batch_size = " << c.mlp.batch_size << "\n";
  out << "max_epochs = " << c.mlp.max_epochs << "\n";
  out << "patience = " << c.mlp.early_stop_patience << "\n";
  out << "loss = " << (c.mlp.loss == LossKind::cross_entropy ? "cross_entropy" : "squared_error")
      << "\n";
  out << "seed = " << c.mlp.seed << "\n";
  out << "bn_epsilon = " << c.mlp.bn_epsilon << "\n";
  out << "bn_momentum = " << c.mlp.bn_momentum << "\n";
  out << "[out]\n";
  out << "dir = " << c.out_dir << "\n";
  out << "evaluator = " << c.evaluator << "\n";
  return out.str();
}

}  // namespace igrf
