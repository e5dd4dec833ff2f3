#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "igrf/matrix.hpp"
#include "igrf/table.hpp"

namespace igrf {

/// One original feature and the encoded column span it expanded into.
struct EncodedGroup {
  std::string name;             // original feature name
  std::size_t schema_column;    // feature id in the source schema
  std::vector<std::size_t> columns;  // encoded column indices
};

/// Fully numeric design matrix: numeric features pass through, categorical
/// features are expanded to one binary column per training-set category
/// ("col=value"). Every encoded column belongs to exactly one group.
struct EncodedMatrix {
  std::vector<std::string> feature_names;
  Matrix values;
  std::vector<std::int32_t> labels;
  std::vector<std::string> class_names;
  std::vector<EncodedGroup> groups;  // in schema feature order

  std::optional<std::size_t> group_of_column(std::size_t column) const;
  const EncodedGroup* group_by_schema_column(std::size_t schema_column) const;
};

/// Expands t against the category vocabulary of vocabulary_source (the
/// training table; categories are taken in sorted order). Categories unseen
/// in the vocabulary encode as an all-zero group row.
EncodedMatrix one_hot(const Table& t, const Table& vocabulary_source);

/// Per-column min/max learned on a training matrix.
struct MinMaxScaler {
  std::vector<double> min, max;

  static MinMaxScaler fit(const EncodedMatrix& train);
  /// (x - min) / (max - min); constant columns map to 0. When clip is set,
  /// results are clamped into [0, 1] (used for matrices the scaler was not
  /// fitted on).
  EncodedMatrix transform(const EncodedMatrix& m, bool clip) const;
};

/// Fits on train, transforms train exactly into [0,1] and every other
/// matrix with the training min/max followed by clipping.
std::pair<EncodedMatrix, std::vector<EncodedMatrix>> minmax_fit_transform(
    const EncodedMatrix& train, const std::vector<EncodedMatrix>& others);

}  // namespace igrf
