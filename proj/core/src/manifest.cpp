#include "igrf/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "igrf/errors.hpp"
#include "igrf/sha256.hpp"

namespace igrf {

RunManifest::RunManifest(std::string version, std::string config_echo_text)
    : version_(std::move(version)), config_echo_(std::move(config_echo_text)) {}

void RunManifest::record_stage(const std::string& stage,
                               const std::vector<std::string>& input_files,
                               const std::vector<std::string>& output_files) {
  const auto hash_all = [](const std::vector<std::string>& files) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& f : files) {
      j[std::filesystem::path(f).filename().string()] = sha256_file(f);
    }
    return j.dump();
  };
  stages_[stage]["inputs"] = hash_all(input_files);
  stages_[stage]["outputs"] = hash_all(output_files);
}

void RunManifest::record_value(const std::string& stage, const std::string& key,
                               const std::string& value) {
  stages_[stage][key] = nlohmann::json(value).dump();
}

void RunManifest::record_counts(const std::string& stage, const std::string& key,
                                const std::map<std::string, std::size_t>& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, count] : counts) j[name] = count;
  stages_[stage][key] = j.dump();
}

void RunManifest::record_features(const std::string& stage, const std::string& key,
                                  const std::vector<std::string>& features) {
  stages_[stage][key] = nlohmann::json(features).dump();
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = version_;
  j["config"] = config_echo_;
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [stage, entries] : stages_) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [key, value] : entries) entry[key] = nlohmann::json::parse(value);
    stages[stage] = std::move(entry);
  }
  j["stages"] = std::move(stages);
  return j.dump(2);
}

void RunManifest::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << to_json() << "\n";
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const nlohmann::json j = nlohmann::json::parse(buf.str());

  RunManifest m;
  m.version_ = j.at("version").get<std::string>();
  m.config_echo_ = j.at("config").get<std::string>();
  for (const auto& [stage, entry] : j.at("stages").items()) {
    for (const auto& [key, value] : entry.items()) {
      m.stages_[stage][key] = value.dump();
    }
  }
  return m;
}

bool operator==(const RunManifest& a, const RunManifest& b) {
  return a.version_ == b.version_ && a.config_echo_ == b.config_echo_ && a.stages_ == b.stages_;
}

void append_run_stats(const std::string& path, const std::string& stage, double seconds) {
  std::ofstream out(path, std::ios::app);
  if (!out) return;  // stats are best-effort
  out << stage << " " << seconds << "s\n";
}

}  // namespace igrf
