#include "igrf/preprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "igrf/errors.hpp"
#include "igrf/rng.hpp"

namespace igrf {

Table clean(const Table& t, const std::string& binary_label_column) {
  std::vector<std::size_t> keep;
  keep.reserve(t.row_count);
  for (std::size_t r = 0; r < t.row_count; ++r) {
    bool missing = t.labels[r] == kMissingCode;
    for (std::size_t c = 0; c < t.numeric.size() && !missing; ++c) {
      missing = is_missing(t.numeric[c][r]);
    }
    for (std::size_t c = 0; c < t.categorical.size() && !missing; ++c) {
      missing = t.categorical[c][r] == kMissingCode;
    }
    if (!missing) keep.push_back(r);
  }
  Table out = t.select_rows(keep);

  const auto drop_idx = out.schema.index_of(binary_label_column);
  if (drop_idx && out.schema.columns[*drop_idx].kind != ColumnKind::label) {
    const ColumnKind kind = out.schema.columns[*drop_idx].kind;
    const std::size_t slot =
        kind == ColumnKind::numeric ? out.numeric_slot(*drop_idx) : out.categorical_slot(*drop_idx);
    if (kind == ColumnKind::numeric) {
      out.numeric.erase(out.numeric.begin() + static_cast<std::ptrdiff_t>(slot));
    } else {
      out.categorical.erase(out.categorical.begin() + static_cast<std::ptrdiff_t>(slot));
      out.categories.erase(out.categories.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    out.schema.columns.erase(out.schema.columns.begin() + static_cast<std::ptrdiff_t>(*drop_idx));
  }
  return out;
}

Table remove_minority(const Table& t, const std::set<std::string>& drop) {
  if (drop.empty()) return t;
  std::vector<bool> dropped(t.schema.label_classes.size(), false);
  for (const auto& name : drop) {
    const auto idx = t.schema.class_index(name);
    if (!idx) throw DataError("cannot drop unknown class: " + name);
    dropped[*idx] = true;
  }

  std::vector<std::int32_t> remap(t.schema.label_classes.size(), kMissingCode);
  std::vector<std::string> kept_classes;
  for (std::size_t i = 0; i < t.schema.label_classes.size(); ++i) {
    if (!dropped[i]) {
      remap[i] = static_cast<std::int32_t>(kept_classes.size());
      kept_classes.push_back(t.schema.label_classes[i]);
    }
  }

  std::vector<std::size_t> keep;
  keep.reserve(t.row_count);
  for (std::size_t r = 0; r < t.row_count; ++r) {
    const std::int32_t l = t.labels[r];
    if (l == kMissingCode || !dropped[static_cast<std::size_t>(l)]) keep.push_back(r);
  }

  Table out = t.select_rows(keep);
  out.schema.label_classes = kept_classes;
  for (auto& l : out.labels) {
    if (l != kMissingCode) l = remap[static_cast<std::size_t>(l)];
  }
  return out;
}

Table oversample(const Table& t, const std::string& class_name, std::size_t factor) {
  const auto cls = t.schema.class_index(class_name);
  if (!cls) throw DataError("oversample: class not in schema: " + class_name);
  const auto target = static_cast<std::int32_t>(*cls);

  std::vector<std::size_t> rows(t.row_count);
  for (std::size_t r = 0; r < t.row_count; ++r) rows[r] = r;
  std::vector<std::size_t> dup;
  for (std::size_t r = 0; r < t.row_count; ++r) {
    if (t.labels[r] == target) dup.push_back(r);
  }
  if (dup.empty()) throw DataError("oversample: class has no rows: " + class_name);
  for (std::size_t pass = 1; pass < factor; ++pass) {
    rows.insert(rows.end(), dup.begin(), dup.end());
  }
  return t.select_rows(rows);
}

std::pair<Table, Table> split_holdout(const Table& t, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");

  const std::size_t k = t.schema.label_classes.size();
  std::vector<std::vector<std::size_t>> per_class(k);
  for (std::size_t r = 0; r < t.row_count; ++r) {
    if (t.labels[r] == kMissingCode) throw DataError("split_holdout: row with missing label");
    per_class[static_cast<std::size_t>(t.labels[r])].push_back(r);
  }

  // Per-class floor allocation, then distribute the remainder up to the
  // rounded global target by the largest fractional parts (earliest class on
  // ties). This is what reproduces odd-count class splits exactly.
  const auto target_total = static_cast<std::size_t>(
      std::floor(static_cast<double>(t.row_count) * ratio + 0.5));
  std::vector<std::size_t> take(k);
  std::vector<std::pair<double, std::size_t>> fractional;  // (-fraction, class)
  std::size_t allocated = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double exact = static_cast<double>(per_class[c].size()) * ratio;
    take[c] = static_cast<std::size_t>(std::floor(exact));
    allocated += take[c];
    fractional.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::stable_sort(fractional.begin(), fractional.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < fractional.size() && allocated < target_total; ++i) {
    const std::size_t c = fractional[i].second;
    if (take[c] < per_class[c].size()) {
      ++take[c];
      ++allocated;
    }
  }

  Rng rng(seed);
  std::vector<bool> to_first(t.row_count, false);
  for (std::size_t c = 0; c < k; ++c) {
    auto& rows = per_class[c];
    shuffle(rows, rng);
    for (std::size_t i = 0; i < take[c]; ++i) to_first[rows[i]] = true;
  }

  std::vector<std::size_t> first_rows, second_rows;
  first_rows.reserve(target_total);
  second_rows.reserve(t.row_count - target_total);
  for (std::size_t r = 0; r < t.row_count; ++r) {
    (to_first[r] ? first_rows : second_rows).push_back(r);
  }
  return {t.select_rows(first_rows), t.select_rows(second_rows)};
}

namespace {

struct RowKey {
  std::vector<std::uint64_t> bits;
  bool operator==(const RowKey&) const = default;
};

struct RowKeyHash {
  std::size_t operator()(const RowKey& k) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (std::uint64_t b : k.bits) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

Table deduplicate(const Table& t) {
  std::unordered_map<RowKey, std::size_t, RowKeyHash> seen;
  seen.reserve(t.row_count);
  std::vector<std::size_t> keep;
  keep.reserve(t.row_count);

  RowKey key;
  key.bits.resize(t.numeric.size() + t.categorical.size() + 1);
  for (std::size_t r = 0; r < t.row_count; ++r) {
    std::size_t i = 0;
    for (const auto& col : t.numeric) {
      double v = col[r];
      if (v == 0.0) v = 0.0;  // fold -0.0 into +0.0
      key.bits[i++] = std::bit_cast<std::uint64_t>(v);
    }
    for (const auto& col : t.categorical) {
      key.bits[i++] = static_cast<std::uint64_t>(static_cast<std::int64_t>(col[r]));
    }
    key.bits[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(t.labels[r]));
    if (seen.emplace(key, r).second) keep.push_back(r);
  }
  return t.select_rows(keep);
}

}  // namespace igrf
