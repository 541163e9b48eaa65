#include "cva/cli/inputs.hpp"

#include <regex>

#include "cva/cli/csv.hpp"

namespace cva::cli {
namespace {

const std::string& checked_date(const CsvTable& table, const CsvRow& row, std::size_t field) {
  static const std::regex iso(R"(\d{4}-\d{2}-\d{2})");
  const auto& text = table.text(row, field);
  if (!std::regex_match(text, iso)) table.fail(row, field, "date must be yyyy-mm-dd");
  return text;
}

}  // namespace

Portfolio load_portfolio(const std::filesystem::path& path) {
  const auto table = CsvTable::load(path, kPortfolioHeader);
  std::vector<Instrument> instruments;
  for (const auto& row : table.rows()) {
    Instrument inst{};
    try {
      inst.kind = parse_instrument_kind(table.text(row, 0));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      table.fail(row, 0, e.what());
    }
    inst.strike = table.number(row, 1);
    inst.maturity = table.number(row, 2);
    inst.notional = table.number(row, 3);
    try {
      Portfolio check({inst});
    } catch (const InputError& e) {
      table.fail(row, 0, e.what());
    }
    instruments.push_back(inst);
  }
  if (instruments.empty()) throw InputError(path.string() + ": portfolio has no instruments");
  return Portfolio(std::move(instruments));
}

std::vector<CdsPanelQuote> load_cds_quotes(const std::filesystem::path& path) {
  const auto table = CsvTable::load(path, kCdsQuotesHeader);
  std::vector<CdsPanelQuote> out;
  for (const auto& row : table.rows()) {
    CdsPanelQuote q{table.text(row, 0), checked_date(table, row, 1),
                    {table.number(row, 2), table.number(row, 3), table.number(row, 4)}};
    if (q.quote.tenor <= 0.0) table.fail(row, 2, "tenor must be positive");
    if (q.quote.spread < 0.0) table.fail(row, 3, "spread must be >= 0");
    if (!(q.quote.recovery >= 0.0 && q.quote.recovery < 1.0))
      table.fail(row, 4, "recovery must be in [0, 1)");
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<EdfRecord> load_edf_panel(const std::filesystem::path& path) {
  const auto table = CsvTable::load(path, kEdfPanelHeader);
  std::vector<EdfRecord> out;
  for (const auto& row : table.rows()) {
    EdfRecord r{table.text(row, 0), checked_date(table, row, 1), table.number(row, 2)};
    if (!(r.edf_1y >= 0.0 && r.edf_1y < 1.0)) table.fail(row, 2, "edf_1y must be in [0, 1)");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<FirmAttributes> load_firm_attributes(const std::filesystem::path& path) {
  const auto table = CsvTable::load(path, kFirmAttrsHeader);
  std::vector<FirmAttributes> out;
  for (const auto& row : table.rows())
    out.push_back({table.text(row, 0), table.text(row, 1), table.text(row, 2), table.text(row, 3)});
  return out;
}

}  // namespace cva::cli
