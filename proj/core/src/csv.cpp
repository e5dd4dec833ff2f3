#include "igrf/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "igrf/errors.hpp"

namespace igrf {

std::optional<std::vector<std::string>> CsvReader::next_record() {
  int c = in_.get();
  if (c == EOF) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;

  while (true) {
    if (quoted) {
      if (c == EOF) throw DataError("unterminated quoted CSV field");
      if (c == '"') {
        const int next = in_.peek();
        if (next == '"') {
          field.push_back('"');
          in_.get();
        } else {
          quoted = false;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
    } else {
      if (c == EOF || c == '\n') break;
      if (c == '\r') {
        if (in_.peek() == '\n') in_.get();
        break;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '"' && field.empty()) {
        quoted = true;
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
    c = in_.get();
  }
  fields.push_back(std::move(field));
  ++records_read_;
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.put(',');
    out << csv_escape(fields[i]);
  }
  out.put('\n');
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace igrf
