#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace igrf {

// Minimal RFC-4180 reader/writer: quoted fields may contain commas, quotes
// (doubled) and line breaks; records end at CRLF or LF outside quotes.

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws DataError on an
  /// unterminated quoted field.
  std::optional<std::vector<std::string>> next_record();

  std::size_t records_read() const { return records_read_; }

 private:
  std::istream& in_;
  std::size_t records_read_ = 0;
};

/// Quotes the field if it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);
void write_csv_record(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace igrf
