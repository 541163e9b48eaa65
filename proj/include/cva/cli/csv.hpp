#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cva/errors.hpp"

namespace cva::cli {

/// Parse failure located at file:line:column (1-based).
class ParseError : public InputError {
 public:
  ParseError(const std::string& file, std::size_t line, std::size_t column,
             const std::string& message);
};

struct CsvField {
  std::string text;
  std::size_t column;
};

struct CsvRow {
  std::size_t line;
  std::vector<CsvField> fields;
};

/// Comma-separated file with a mandatory, exact header line.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, const std::string& source,
                        std::string_view expected_header);
  static CsvTable load(const std::filesystem::path& path, std::string_view expected_header);

  const std::vector<CsvRow>& rows() const noexcept { return rows_; }
  const std::string& source() const noexcept { return source_; }

  double number(const CsvRow& row, std::size_t field) const;
  const std::string& text(const CsvRow& row, std::size_t field) const;
  [[noreturn]] void fail(const CsvRow& row, std::size_t field, const std::string& message) const;

 private:
  std::string source_;
  std::vector<CsvRow> rows_;
};

inline constexpr std::string_view kPortfolioHeader = "kind,strike,maturity_years,notional";
inline constexpr std::string_view kCdsQuotesHeader =
    "counterparty_id,date,tenor_years,spread_decimal,recovery";
inline constexpr std::string_view kEdfPanelHeader = "firm_id,date,edf_1y";
inline constexpr std::string_view kFirmAttrsHeader = "firm_id,region,sector,rating_bucket";

}  // namespace cva::cli
