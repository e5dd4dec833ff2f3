#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace igrf {

enum class ColumnKind { numeric, categorical, label };

struct Column {
  std::string name;
  ColumnKind kind;

  bool operator==(const Column&) const = default;
};

/// Immutable column layout of a dataset. Feature ids used throughout the
/// toolkit are positions in `columns`; the class index of a label is its
/// position in `label_classes`.
struct Schema {
  std::vector<Column> columns;
  std::vector<std::string> label_classes;

  /// Enforces: exactly one label column, unique column names.
  void validate() const;

  std::size_t label_column() const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::optional<std::size_t> class_index(const std::string& name) const;

  std::vector<std::size_t> numeric_columns() const;
  std::vector<std::size_t> categorical_columns() const;
  /// All feature columns (numeric + categorical) in schema order.
  std::vector<std::size_t> feature_columns() const;

  bool operator==(const Schema&) const = default;
};

constexpr std::int32_t kMissingCode = -1;
inline bool is_missing(double v) { return !std::isfinite(v); }

/// Column-store table. All column vectors have length row_count; numeric
/// cells use NaN as the missing marker until clean() removes them, and
/// categorical/label codes use kMissingCode.
struct Table {
  Schema schema;
  std::vector<std::vector<double>> numeric;           // per numeric column, schema order
  std::vector<std::vector<std::int32_t>> categorical; // category codes per categorical column
  std::vector<std::vector<std::string>> categories;   // code -> string, per categorical column
  std::vector<std::int32_t> labels;                   // class indices
  std::size_t row_count = 0;

  /// Position of schema column `col` within the numeric (resp. categorical) store.
  std::size_t numeric_slot(std::size_t col) const;
  std::size_t categorical_slot(std::size_t col) const;

  std::size_t missing_count() const;
  std::vector<std::size_t> class_counts() const;
  std::string category_string(std::size_t cat_slot, std::int32_t code) const;

  /// Row-restricted copy, preserving the given order.
  Table select_rows(const std::vector<std::size_t>& rows) const;
};

/// Reads an RFC-4180 CSV with a header into a Table. The header must contain
/// every schema column (any order); names in `ignore_columns` are skipped;
/// any other name not in the schema is a schema error. Numeric parse failures
/// and empty cells become missing markers. If schema.label_classes is empty
/// the class list is discovered in first-appearance order; otherwise a
/// non-empty label outside the list is a row-level error.
Table load_csv(const std::string& path, const Schema& schema,
               const std::set<std::string>& ignore_columns = {});

/// Writes the table back to CSV with the same quoting rules load_csv accepts.
void export_csv(const Table& t, const std::string& path);

}  // namespace igrf
