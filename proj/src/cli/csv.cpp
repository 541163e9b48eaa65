#include "cva/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cva::cli {
namespace {

std::string locate(const std::string& file, std::size_t line, std::size_t column,
                   const std::string& message) {
  std::ostringstream os;
  os << file << ":" << line << ":" << column << ": " << message;
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

ParseError::ParseError(const std::string& file, std::size_t line, std::size_t column,
                       const std::string& message)
    : InputError(locate(file, line, column, message)) {}

CsvTable CsvTable::parse(std::string_view text, const std::string& source,
                         std::string_view expected_header) {
  CsvTable table;
  table.source_ = source;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::size_t expected_fields = 1;
  for (char c : expected_header) expected_fields += c == ',';

  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    if (!header_seen) {
      if (line != expected_header)
        throw ParseError(source, line_no, 1,
                         "expected header '" + std::string(expected_header) + "'");
      header_seen = true;
      continue;
    }

    CsvRow row{line_no, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto raw = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      row.fields.push_back({std::string(trim(raw)), start + 1});
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.fields.size() != expected_fields) {
      std::ostringstream os;
      os << "expected " << expected_fields << " fields, found " << row.fields.size();
      throw ParseError(source, line_no, 1, os.str());
    }
    table.rows_.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(source, 1, 1, "missing header");
  return table;
}

CsvTable CsvTable::load(const std::filesystem::path& path, std::string_view expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string(), expected_header);
}

double CsvTable::number(const CsvRow& row, std::size_t field) const {
  const auto& f = row.fields.at(field);
  double value = 0.0;
  const char* first = f.text.data();
  const char* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (f.text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    fail(row, field, "invalid number '" + f.text + "'");
  return value;
}

const std::string& CsvTable::text(const CsvRow& row, std::size_t field) const {
  const auto& f = row.fields.at(field);
  if (f.text.empty()) fail(row, field, "empty field");
  return f.text;
}

void CsvTable::fail(const CsvRow& row, std::size_t field, const std::string& message) const {
  throw ParseError(source_, row.line, row.fields.at(field).column, message);
}

}  // namespace cva::cli
