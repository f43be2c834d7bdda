#include "hyperroles/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "hyperroles/error.hpp"

namespace hyperroles::csv {

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record_line_ = line_;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        // Quoted field continues on the next physical line.
        if (!std::getline(in_, line)) {
          throw Error(ErrorCode::kInputError, "line " + std::to_string(record_line_) + ": unterminated quote");
        }
        ++line_;
        field.push_back('\n');
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF
    } else {
      field.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return true;
}

std::optional<std::size_t> Header::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  return std::nullopt;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidValue, "cannot format double");
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::kInputError, "bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return v;
}

long long parse_int(std::string_view s, std::string_view what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInputError, "bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return v;
}

void Table::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

void Table::validate() const {
  const auto& cols = schema_->columns;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    const auto where = [&](std::size_t c) {
      return schema_->name + " row " + std::to_string(r + 1) + " column '" + cols[c].name + "'";
    };
    if (row.size() != cols.size()) {
      throw Error(ErrorCode::kSchemaMismatch, schema_->name + " row " + std::to_string(r + 1) + " has " +
                                                  std::to_string(row.size()) + " cells, expected " +
                                                  std::to_string(cols.size()));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& cell = row[c];
      if (cell.empty()) {
        if (!cols[c].nullable && cols[c].type != ColumnType::kString) {
          throw Error(ErrorCode::kSchemaMismatch, where(c) + " may not be empty");
        }
        continue;
      }
      try {
        switch (cols[c].type) {
          case ColumnType::kString: break;
          case ColumnType::kInteger: parse_int(cell, cols[c].name); break;
          case ColumnType::kReal: parse_double(cell, cols[c].name); break;
          case ColumnType::kBool:
            if (cell != "true" && cell != "false") throw Error(ErrorCode::kInputError, "not a bool");
            break;
        }
      } catch (const Error&) {
        throw Error(ErrorCode::kSchemaMismatch, where(c) + " has ill-typed value '" + cell + "'");
      }
    }
  }
}

void Table::write(std::ostream& out) const {
  validate();
  const auto& cols = schema_->columns;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out << ',';
    out << cols[c].name;
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << escape(row[c]);
    }
    out << '\n';
  }
}

void Table::write(const std::filesystem::path& path) const {
  validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kStageFailure, "cannot write " + path.string());
  write(out);
  if (!out) throw Error(ErrorCode::kStageFailure, "write failed for " + path.string());
}

}  // namespace hyperroles::csv
