#include "igrf/info_gain.hpp"

#include <algorithm>
#include <cmath>

#include "igrf/errors.hpp"

namespace igrf {

std::vector<double> Discretizer::edges(std::span<const double> values) const {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  const std::size_t n = sorted.size();
  if (n == 0 || bin_count < 2) return out;
  out.reserve(bin_count - 1);
  for (std::size_t i = 1; i < bin_count; ++i) {
    const double edge = sorted[i * n / bin_count];
    if (out.empty() || edge > out.back()) out.push_back(edge);
  }
  return out;
}

std::size_t bin_index(const std::vector<double>& edges, double x) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

double entropy_bits(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  for (std::size_t c : class_counts) total += c;
  if (total == 0) throw DataError("entropy of an empty count vector");
  double h = 0.0;
  for (std::size_t c : class_counts) {
    if (c == 0) continue;  // 0*log(0) := 0
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double conditional_entropy_bits(const std::vector<std::vector<std::size_t>>& joint_counts) {
  std::size_t total = 0;
  for (const auto& bin : joint_counts) {
    for (std::size_t c : bin) total += c;
  }
  if (total == 0) throw DataError("conditional entropy of an empty joint table");
  double h = 0.0;
  for (const auto& bin : joint_counts) {
    std::size_t bin_total = 0;
    for (std::size_t c : bin) bin_total += c;
    if (bin_total == 0) continue;
    const double p_bin = static_cast<double>(bin_total) / static_cast<double>(total);
    h += p_bin * entropy_bits(bin);
  }
  return h;
}

double information_gain(std::span<const double> feature, std::span<const std::int32_t> labels,
                        std::size_t n_classes, const Discretizer& d) {
  if (feature.size() != labels.size()) throw DataError("information_gain: length mismatch");
  if (feature.empty()) throw DataError("information_gain: empty input");

  const auto edges = d.edges(feature);
  std::vector<std::vector<std::size_t>> joint(edges.size() + 1,
                                              std::vector<std::size_t>(n_classes, 0));
  std::vector<std::size_t> marginal(n_classes, 0);
  for (std::size_t i = 0; i < feature.size(); ++i) {
    const auto cls = static_cast<std::size_t>(labels[i]);
    ++joint[bin_index(edges, feature[i])][cls];
    ++marginal[cls];
  }
  return entropy_bits(marginal) - conditional_entropy_bits(joint);
}

std::vector<IgScore> rank_ig(const Table& t, const Discretizer& d) {
  const auto numeric_cols = t.schema.numeric_columns();
  if (numeric_cols.empty()) throw DataError("rank_ig: table has no numeric features");

  std::vector<IgScore> scores;
  scores.reserve(numeric_cols.size());
  for (std::size_t col : numeric_cols) {
    const auto& values = t.numeric[t.numeric_slot(col)];
    const double ig =
        information_gain(values, t.labels, t.schema.label_classes.size(), d);
    scores.push_back({col, t.schema.columns[col].name, ig, 0.0});
  }

  double lo = scores[0].raw_ig, hi = scores[0].raw_ig;
  for (const auto& s : scores) {
    lo = std::min(lo, s.raw_ig);
    hi = std::max(hi, s.raw_ig);
  }
  for (auto& s : scores) {
    // All-equal scores normalize to 1: nothing is distinguishable, keep all.
    s.normalized = hi > lo ? (s.raw_ig - lo) / (hi - lo) : 1.0;
  }

  std::stable_sort(scores.begin(), scores.end(), [](const IgScore& a, const IgScore& b) {
    return a.raw_ig > b.raw_ig;
  });
  return scores;
}

}  // namespace igrf
