#pragma once

#include <filesystem>
#include <vector>

#include "cva/exposure_engine.hpp"
#include "cva/pd_calibration.hpp"

namespace cva::cli {

Portfolio load_portfolio(const std::filesystem::path& path);
std::vector<CdsPanelQuote> load_cds_quotes(const std::filesystem::path& path);
std::vector<EdfRecord> load_edf_panel(const std::filesystem::path& path);
std::vector<FirmAttributes> load_firm_attributes(const std::filesystem::path& path);

}  // namespace cva::cli
