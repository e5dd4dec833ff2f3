#include "igrf/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "igrf/csv.hpp"
#include "igrf/errors.hpp"

namespace igrf {

void Schema::validate() const {
  std::size_t labels_seen = 0;
  std::set<std::string> names;
  for (const auto& c : columns) {
    if (c.kind == ColumnKind::label) ++labels_seen;
    if (!names.insert(c.name).second) throw DataError("duplicate column name: " + c.name);
  }
  if (labels_seen != 1) {
    throw DataError("schema must have exactly one label column, found " +
                    std::to_string(labels_seen));
  }
  std::set<std::string> classes(label_classes.begin(), label_classes.end());
  if (classes.size() != label_classes.size()) throw DataError("duplicate label class name");
}

std::size_t Schema::label_column() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind == ColumnKind::label) return i;
  }
  throw DataError("schema has no label column");
}

std::optional<std::size_t> Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Schema::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < label_classes.size(); ++i) {
    if (label_classes[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Schema::numeric_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind == ColumnKind::numeric) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Schema::categorical_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind == ColumnKind::categorical) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Schema::feature_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind != ColumnKind::label) out.push_back(i);
  }
  return out;
}

std::size_t Table::numeric_slot(std::size_t col) const {
  std::size_t slot = 0;
  for (std::size_t i = 0; i < col; ++i) {
    if (schema.columns[i].kind == ColumnKind::numeric) ++slot;
  }
  return slot;
}

std::size_t Table::categorical_slot(std::size_t col) const {
  std::size_t slot = 0;
  for (std::size_t i = 0; i < col; ++i) {
    if (schema.columns[i].kind == ColumnKind::categorical) ++slot;
  }
  return slot;
}

std::size_t Table::missing_count() const {
  std::size_t n = 0;
  for (const auto& col : numeric) {
    for (double v : col) {
      if (is_missing(v)) ++n;
    }
  }
  for (const auto& col : categorical) {
    for (std::int32_t c : col) {
      if (c == kMissingCode) ++n;
    }
  }
  for (std::int32_t l : labels) {
    if (l == kMissingCode) ++n;
  }
  return n;
}

std::vector<std::size_t> Table::class_counts() const {
  std::vector<std::size_t> counts(schema.label_classes.size(), 0);
  for (std::int32_t l : labels) {
    if (l != kMissingCode) ++counts[static_cast<std::size_t>(l)];
  }
  return counts;
}

std::string Table::category_string(std::size_t cat_slot, std::int32_t code) const {
  if (code == kMissingCode) return "";
  return categories[cat_slot][static_cast<std::size_t>(code)];
}

Table Table::select_rows(const std::vector<std::size_t>& rows) const {
  Table out;
  out.schema = schema;
  out.categories = categories;
  out.row_count = rows.size();
  out.numeric.resize(numeric.size());
  out.categorical.resize(categorical.size());
  for (std::size_t c = 0; c < numeric.size(); ++c) {
    out.numeric[c].reserve(rows.size());
    for (std::size_t r : rows) out.numeric[c].push_back(numeric[c][r]);
  }
  for (std::size_t c = 0; c < categorical.size(); ++c) {
    out.categorical[c].reserve(rows.size());
    for (std::size_t r : rows) out.categorical[c].push_back(categorical[c][r]);
  }
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels[r]);
  return out;
}

namespace {

double parse_numeric_cell(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return v;
}

}  // namespace

Table load_csv(const std::string& path, const Schema& schema,
               const std::set<std::string>& ignore_columns) {
  schema.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path);

  CsvReader reader(in);
  auto header = reader.next_record();
  if (!header) throw DataError("empty CSV file (no header): " + path);

  // Map each file column to a schema column, order-insensitive.
  constexpr std::size_t kIgnored = static_cast<std::size_t>(-1);
  std::vector<std::size_t> file_to_schema(header->size(), kIgnored);
  std::vector<bool> seen(schema.columns.size(), false);
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string& name = (*header)[i];
    if (ignore_columns.count(name)) continue;
    const auto idx = schema.index_of(name);
    if (!idx) throw DataError("unknown column in header: " + name);
    if (seen[*idx]) throw DataError("column appears twice in header: " + name);
    seen[*idx] = true;
    file_to_schema[i] = *idx;
  }
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    if (!seen[i]) throw DataError("column missing from header: " + schema.columns[i].name);
  }

  Table t;
  t.schema = schema;
  t.numeric.resize(schema.numeric_columns().size());
  const auto cat_cols = schema.categorical_columns();
  t.categorical.resize(cat_cols.size());
  t.categories.resize(cat_cols.size());

  std::vector<std::unordered_map<std::string, std::int32_t>> cat_codes(cat_cols.size());
  std::unordered_map<std::string, std::int32_t> class_codes;
  const bool discover_classes = schema.label_classes.empty();
  for (std::size_t i = 0; i < schema.label_classes.size(); ++i) {
    class_codes.emplace(schema.label_classes[i], static_cast<std::int32_t>(i));
  }

  // Schema column -> store slot.
  std::vector<std::size_t> slot(schema.columns.size(), 0);
  {
    std::size_t num_slot = 0, cat_slot = 0;
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
      if (schema.columns[i].kind == ColumnKind::numeric) slot[i] = num_slot++;
      else if (schema.columns[i].kind == ColumnKind::categorical) slot[i] = cat_slot++;
    }
  }

  while (auto record = reader.next_record()) {
    if (record->size() == 1 && (*record)[0].empty()) continue;  // trailing blank line
    if (record->size() != header->size()) {
      throw DataError("row " + std::to_string(reader.records_read()) + ": expected " +
                      std::to_string(header->size()) + " fields, got " +
                      std::to_string(record->size()));
    }
    for (std::size_t i = 0; i < record->size(); ++i) {
      const std::size_t col = file_to_schema[i];
      if (col == kIgnored) continue;
      const std::string& cell = (*record)[i];
      switch (schema.columns[col].kind) {
        case ColumnKind::numeric:
          t.numeric[slot[col]].push_back(parse_numeric_cell(cell));
          break;
        case ColumnKind::categorical: {
          if (cell.empty()) {
            t.categorical[slot[col]].push_back(kMissingCode);
            break;
          }
          auto [it, inserted] = cat_codes[slot[col]].try_emplace(
              cell, static_cast<std::int32_t>(t.categories[slot[col]].size()));
          if (inserted) t.categories[slot[col]].push_back(cell);
          t.categorical[slot[col]].push_back(it->second);
          break;
        }
        case ColumnKind::label: {
          if (cell.empty()) {
            t.labels.push_back(kMissingCode);
            break;
          }
          auto it = class_codes.find(cell);
          if (it == class_codes.end()) {
            if (!discover_classes) {
              throw DataError("row " + std::to_string(reader.records_read()) +
                              ": unknown label '" + cell + "'");
            }
            it = class_codes.emplace(cell, static_cast<std::int32_t>(t.schema.label_classes.size()))
                     .first;
            t.schema.label_classes.push_back(cell);
          }
          t.labels.push_back(it->second);
          break;
        }
      }
    }
    ++t.row_count;
  }
  return t;
}

void export_csv(const Table& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);

  std::vector<std::string> fields;
  fields.reserve(t.schema.columns.size());
  for (const auto& c : t.schema.columns) fields.push_back(c.name);
  write_csv_record(out, fields);

  std::vector<std::size_t> slot(t.schema.columns.size(), 0);
  {
    std::size_t num_slot = 0, cat_slot = 0;
    for (std::size_t i = 0; i < t.schema.columns.size(); ++i) {
      if (t.schema.columns[i].kind == ColumnKind::numeric) slot[i] = num_slot++;
      else if (t.schema.columns[i].kind == ColumnKind::categorical) slot[i] = cat_slot++;
    }
  }

  for (std::size_t r = 0; r < t.row_count; ++r) {
    fields.clear();
    for (std::size_t col = 0; col < t.schema.columns.size(); ++col) {
      switch (t.schema.columns[col].kind) {
        case ColumnKind::numeric: {
          const double v = t.numeric[slot[col]][r];
          fields.push_back(is_missing(v) ? std::string() : format_double(v));
          break;
        }
        case ColumnKind::categorical: {
          fields.push_back(t.category_string(slot[col], t.categorical[slot[col]][r]));
          break;
        }
        case ColumnKind::label: {
          const std::int32_t l = t.labels[r];
          fields.push_back(l == kMissingCode ? std::string()
                                             : t.schema.label_classes[static_cast<std::size_t>(l)]);
          break;
        }
      }
    }
    write_csv_record(out, fields);
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace igrf
