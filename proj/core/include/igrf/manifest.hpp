#pragma once

#include <map>
#include <string>
#include <vector>

namespace igrf {

/// Deterministic record of a run: config echo, tool version, per-stage
/// input/output content hashes and selected feature lists. Two runs with
/// identical config and inputs produce byte-identical manifests, so wall
/// clock timings are kept in a separate stats file.
class RunManifest {
 public:
  RunManifest() = default;
  RunManifest(std::string version, std::string config_echo_text);

  /// Hashes the named files and stores them under the stage entry.
  void record_stage(const std::string& stage, const std::vector<std::string>& input_files,
                    const std::vector<std::string>& output_files);
  void record_value(const std::string& stage, const std::string& key, const std::string& value);
  void record_counts(const std::string& stage, const std::string& key,
                     const std::map<std::string, std::size_t>& counts);
  void record_features(const std::string& stage, const std::string& key,
                       const std::vector<std::string>& features);

  const std::string& version() const { return version_; }
  const std::string& config_text() const { return config_echo_; }

  std::string to_json() const;
  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);

 private:
  std::string version_;
  std::string config_echo_;
  // stage -> ordered key -> value (scalar, hash map, or list), kept as a
  // pre-rendered JSON string tree via sorted maps for stable output
  std::map<std::string, std::map<std::string, std::string>> stages_;

  friend bool operator==(const RunManifest&, const RunManifest&);
};

bool operator==(const RunManifest& a, const RunManifest& b);

/// Appends wall-clock timings; informational only, not covered by the
/// determinism contract.
void append_run_stats(const std::string& path, const std::string& stage, double seconds);

}  // namespace igrf
