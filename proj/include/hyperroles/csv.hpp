#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hyperroles::csv {

/// RFC 4180 style reader: quoted fields, doubled quotes, CRLF or LF endings.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record; false at end of input.
  bool next(std::vector<std::string>& fields);
  /// Line on which the last returned record started (1-based).
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

/// Header lookup with optional renaming of canonical column names.
class Header {
 public:
  Header() = default;
  explicit Header(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  std::optional<std::size_t> find(std::string_view name) const;
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

std::string escape(std::string_view field);
/// Shortest representation that round-trips through strtod.
std::string format_double(double x);
std::string format_optional(const std::optional<double>& x);

double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

enum class ColumnType { kString, kInteger, kReal, kBool };

struct Column {
  std::string name;
  ColumnType type = ColumnType::kString;
  bool nullable = false;
};

struct Schema {
  std::string name;
  std::vector<Column> columns;
};

/// Rows are held as text; validate() checks every cell against the schema.
class Table {
 public:
  explicit Table(const Schema& schema) : schema_(&schema) {}

  void add_row(std::vector<std::string> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  const Schema& schema() const noexcept { return *schema_; }

  /// Throws kSchemaMismatch describing the first offending cell.
  void validate() const;
  /// Validates and then writes header + rows.
  void write(std::ostream& out) const;
  void write(const std::filesystem::path& path) const;

 private:
  const Schema* schema_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace hyperroles::csv
