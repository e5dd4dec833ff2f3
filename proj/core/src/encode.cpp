#include "igrf/encode.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "igrf/errors.hpp"

namespace igrf {

std::optional<std::size_t> EncodedMatrix::group_of_column(std::size_t column) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& cols = groups[g].columns;
    if (std::find(cols.begin(), cols.end(), column) != cols.end()) return g;
  }
  return std::nullopt;
}

const EncodedGroup* EncodedMatrix::group_by_schema_column(std::size_t schema_column) const {
  for (const auto& g : groups) {
    if (g.schema_column == schema_column) return &g;
  }
  return nullptr;
}

EncodedMatrix one_hot(const Table& t, const Table& vocabulary_source) {
  if (t.schema.columns != vocabulary_source.schema.columns) {
    throw DataError("one_hot: table and vocabulary source have different schemas");
  }

  // Sorted category vocabulary per categorical column, from the source table.
  std::vector<std::vector<std::string>> vocab(vocabulary_source.categories.size());
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    vocab[c] = vocabulary_source.categories[c];
    std::sort(vocab[c].begin(), vocab[c].end());
  }

  EncodedMatrix out;
  out.class_names = t.schema.label_classes;
  out.labels = t.labels;

  std::size_t num_slot = 0, cat_slot = 0;
  for (std::size_t col = 0; col < t.schema.columns.size(); ++col) {
    const auto& column = t.schema.columns[col];
    if (column.kind == ColumnKind::label) continue;
    EncodedGroup group{column.name, col, {}};
    if (column.kind == ColumnKind::numeric) {
      group.columns.push_back(out.feature_names.size());
      out.feature_names.push_back(column.name);
      ++num_slot;
    } else {
      for (const auto& value : vocab[cat_slot]) {
        group.columns.push_back(out.feature_names.size());
        out.feature_names.push_back(column.name + "=" + value);
      }
      ++cat_slot;
    }
    out.groups.push_back(std::move(group));
  }

  out.values = Matrix(t.row_count, out.feature_names.size());

  num_slot = 0;
  cat_slot = 0;
  std::size_t group_idx = 0;
  for (std::size_t col = 0; col < t.schema.columns.size(); ++col) {
    const auto& column = t.schema.columns[col];
    if (column.kind == ColumnKind::label) continue;
    const auto& group = out.groups[group_idx++];
    if (column.kind == ColumnKind::numeric) {
      const auto& values = t.numeric[num_slot++];
      const std::size_t enc = group.columns[0];
      for (std::size_t r = 0; r < t.row_count; ++r) out.values(r, enc) = values[r];
    } else {
      // Map this table's codes onto positions within the sorted vocabulary;
      // categories the vocabulary has never seen stay all-zero.
      const auto& words = vocab[cat_slot];
      std::unordered_map<std::string, std::size_t> pos;
      pos.reserve(words.size());
      for (std::size_t i = 0; i < words.size(); ++i) pos.emplace(words[i], i);
      std::vector<std::ptrdiff_t> code_to_pos(t.categories[cat_slot].size(), -1);
      for (std::size_t code = 0; code < t.categories[cat_slot].size(); ++code) {
        const auto it = pos.find(t.categories[cat_slot][code]);
        if (it != pos.end()) code_to_pos[code] = static_cast<std::ptrdiff_t>(it->second);
      }
      const auto& codes = t.categorical[cat_slot];
      for (std::size_t r = 0; r < t.row_count; ++r) {
        if (codes[r] == kMissingCode) continue;
        const std::ptrdiff_t p = code_to_pos[static_cast<std::size_t>(codes[r])];
        if (p >= 0) out.values(r, group.columns[static_cast<std::size_t>(p)]) = 1.0;
      }
      ++cat_slot;
    }
  }
  return out;
}

MinMaxScaler MinMaxScaler::fit(const EncodedMatrix& train) {
  const std::size_t cols = train.values.cols;
  MinMaxScaler s;
  s.min.assign(cols, std::numeric_limits<double>::infinity());
  s.max.assign(cols, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < train.values.rows; ++r) {
    const auto row = train.values.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      s.min[c] = std::min(s.min[c], row[c]);
      s.max[c] = std::max(s.max[c], row[c]);
    }
  }
  return s;
}

EncodedMatrix MinMaxScaler::transform(const EncodedMatrix& m, bool clip) const {
  if (m.values.cols != min.size()) throw DataError("minmax transform: column count mismatch");
  EncodedMatrix out = m;
  for (std::size_t c = 0; c < min.size(); ++c) {
    const double span = max[c] - min[c];
    for (std::size_t r = 0; r < out.values.rows; ++r) {
      double& v = out.values(r, c);
      v = span > 0.0 ? (v - min[c]) / span : 0.0;
      if (clip) v = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

std::pair<EncodedMatrix, std::vector<EncodedMatrix>> minmax_fit_transform(
    const EncodedMatrix& train, const std::vector<EncodedMatrix>& others) {
  const MinMaxScaler scaler = MinMaxScaler::fit(train);
  std::vector<EncodedMatrix> transformed;
  transformed.reserve(others.size());
  for (const auto& m : others) transformed.push_back(scaler.transform(m, /*clip=*/true));
  return {scaler.transform(train, /*clip=*/false), std::move(transformed)};
}

}  // namespace igrf
