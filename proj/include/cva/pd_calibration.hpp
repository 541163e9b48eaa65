#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cva/credit_curves.hpp"
#include "cva/market_model.hpp"

namespace cva {

struct EdfRecord {
  std::string firm_id;
  std::string date;  // ISO yyyy-mm-dd
  double edf_1y;
};

struct CdsPanelQuote {
  std::string counterparty_id;
  std::string date;
  CdsQuote quote;
};

struct FirmAttributes {
  std::string firm_id;
  std::string region;
  std::string sector;
  std::string rating_bucket;
};

/// Closed vocabularies for firm attributes.
struct AttributeVocabulary {
  std::vector<std::string> regions;
  std::vector<std::string> sectors;
  std::vector<std::string> ratings;  // ordered best to worst

  /// Throws ConfigError naming the offending field when a token is not listed.
  /// Empty lists accept anything.
  void validate(const FirmAttributes& firm) const;
};

struct RegressionFit {
  std::string date;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  std::size_t n_points = 0;
  double r_squared = 0.0;
  double residual_std = 0.0;
};

/// Attribute subset a proxy bucket matches on.
enum class BucketLevel { full, region_rating, sector_rating, rating, global };

std::string_view to_string(BucketLevel level) noexcept;
BucketLevel parse_bucket_level(std::string_view token);
std::vector<BucketLevel> default_fallback_order();

struct ProxySpread {
  double spread;
  BucketLevel bucket;
  std::size_t n_members;
};

/// -ln(1 - p) for a one-year default probability p in [0, 1).
double edf_to_intensity(double edf_1y);

/// spread * (1 - haircut), floored at zero.
double clean_liquidity_premium(double spread, double haircut);

/// OLS of ln(lambda_edf) on ln(lambda_cds). Pairs are (lambda_edf, lambda_cds).
RegressionFit fit_loglog_regression(std::span<const std::pair<double, double>> pairs,
                                    std::string date);

/// Geometric mean of cleaned spreads in the narrowest non-empty bucket, trying
/// levels in fallback order. Global is always tried last.
ProxySpread proxy_cds_spread(const FirmAttributes& target,
                             std::span<const std::pair<FirmAttributes, double>> universe,
                             std::span<const BucketLevel> fallback_order);

/// exp(gamma0 + gamma1 ln(lambda_proxy)).
double real_world_intensity(const RegressionFit& fit, double lambda_cds_proxy);

struct CalibrationSettings {
  double haircut = 0.0;
  double recovery = 0.4;  // used for the proxy spread bootstrap
  double anchor_tenor = 5.0;
  std::vector<BucketLevel> fallback_order = default_fallback_order();
};

struct CalibrationResult {
  RegressionFit fit;
  ProxySpread proxy;
  double lambda_cds_proxy = 0.0;
  double lambda_real_world = 0.0;
  std::size_t n_liquid_firms = 0;
  DefaultCurve curve = DefaultCurve::flat(0.0, Measure::real_world);
};

/// Single-date pipeline: clean spreads, bootstrap the anchor-tenor intensity per
/// liquid firm, pair with EDF intensities, fit, build the target proxy, and map
/// it to a flat real-world curve. Stage failures raise CalibrationError.
CalibrationResult calibrate_counterparty_curve(const FirmAttributes& target,
                                               std::span<const FirmAttributes> universe,
                                               std::span<const EdfRecord> edf_panel,
                                               std::span<const CdsPanelQuote> cds_panel,
                                               const std::string& date, const MarketConfig& market,
                                               const CalibrationSettings& settings);

}  // namespace cva
