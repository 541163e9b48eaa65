#include "cva/pd_calibration.hpp"

#include <algorithm>
#include <cmath>

#include "cva/errors.hpp"
#include "cva/numerics.hpp"

namespace cva {
namespace {

bool contains(const std::vector<std::string>& vocab, const std::string& token) {
  return vocab.empty() || std::find(vocab.begin(), vocab.end(), token) != vocab.end();
}

bool in_bucket(BucketLevel level, const FirmAttributes& a, const FirmAttributes& b) {
  switch (level) {
    case BucketLevel::full:
      return a.region == b.region && a.sector == b.sector && a.rating_bucket == b.rating_bucket;
    case BucketLevel::region_rating:
      return a.region == b.region && a.rating_bucket == b.rating_bucket;
    case BucketLevel::sector_rating:
      return a.sector == b.sector && a.rating_bucket == b.rating_bucket;
    case BucketLevel::rating:
      return a.rating_bucket == b.rating_bucket;
    case BucketLevel::global:
      return true;
  }
  return false;
}

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CalibrationError&) {
    throw;
  } catch (const std::exception& e) {
    throw CalibrationError(stage, e.what());
  }
}

}  // namespace

void AttributeVocabulary::validate(const FirmAttributes& firm) const {
  if (!contains(regions, firm.region))
    throw ConfigError("firm " + firm.firm_id + ": region '" + firm.region + "' not in vocabulary");
  if (!contains(sectors, firm.sector))
    throw ConfigError("firm " + firm.firm_id + ": sector '" + firm.sector + "' not in vocabulary");
  if (!contains(ratings, firm.rating_bucket))
    throw ConfigError("firm " + firm.firm_id + ": rating '" + firm.rating_bucket +
                      "' not in vocabulary");
}

std::string_view to_string(BucketLevel level) noexcept {
  switch (level) {
    case BucketLevel::full:
      return "region+sector+rating";
    case BucketLevel::region_rating:
      return "region+rating";
    case BucketLevel::sector_rating:
      return "sector+rating";
    case BucketLevel::rating:
      return "rating";
    case BucketLevel::global:
      return "global";
  }
  return "unknown";
}

BucketLevel parse_bucket_level(std::string_view token) {
  for (auto level : {BucketLevel::full, BucketLevel::region_rating, BucketLevel::sector_rating,
                     BucketLevel::rating, BucketLevel::global})
    if (token == to_string(level)) return level;
  throw ConfigError("unknown bucket level '" + std::string(token) + "'");
}

std::vector<BucketLevel> default_fallback_order() {
  return {BucketLevel::full, BucketLevel::region_rating, BucketLevel::sector_rating,
          BucketLevel::rating, BucketLevel::global};
}

double edf_to_intensity(double edf_1y) {
  if (!(edf_1y >= 0.0 && edf_1y < 1.0)) throw InputError("EDF must be in [0, 1)");
  return -std::log1p(-edf_1y);
}

double clean_liquidity_premium(double spread, double haircut) {
  if (!(haircut >= 0.0 && haircut < 1.0)) throw ConfigError("haircut must be in [0, 1)");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw InputError("spread must be >= 0");
  return std::max(spread * (1.0 - haircut), 0.0);
}

RegressionFit fit_loglog_regression(std::span<const std::pair<double, double>> pairs,
                                    std::string date) {
  const std::size_t n = pairs.size();
  if (n < 2) throw InputError("regression requires ≥ 2 points");
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lambda_edf, lambda_cds] = pairs[i];
    if (!(lambda_edf > 0.0) || !(lambda_cds > 0.0))
      throw InputError("regression requires strictly positive intensities");
    y[i] = std::log(lambda_edf);
    x[i] = std::log(lambda_cds);
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
    throw DegenerateDesignError("regression design is degenerate: all CDS intensities equal");

  const double x_mean = compensated_sum(x) / static_cast<double>(n);
  const double y_mean = compensated_sum(y) / static_cast<double>(n);
  CompensatedSum sxx;
  CompensatedSum sxy;
  for (std::size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - x_mean) * (x[i] - x_mean));
    sxy.add((x[i] - x_mean) * (y[i] - y_mean));
  }
  RegressionFit fit;
  fit.date = std::move(date);
  fit.n_points = n;
  fit.gamma1 = sxy.value() / sxx.value();
  fit.gamma0 = y_mean - fit.gamma1 * x_mean;

  CompensatedSum ssr;
  CompensatedSum sst;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = y[i] - (fit.gamma0 + fit.gamma1 * x[i]);
    ssr.add(resid * resid);
    sst.add((y[i] - y_mean) * (y[i] - y_mean));
  }
  // A constant response is fit exactly by the zero-slope line.
  fit.r_squared = sst.value() > 0.0 ? std::clamp(1.0 - ssr.value() / sst.value(), 0.0, 1.0) : 1.0;
  fit.residual_std = n > 2 ? std::sqrt(ssr.value() / static_cast<double>(n - 2)) : 0.0;
  return fit;
}

ProxySpread proxy_cds_spread(const FirmAttributes& target,
                             std::span<const std::pair<FirmAttributes, double>> universe,
                             std::span<const BucketLevel> fallback_order) {
  if (universe.empty()) throw InputError("proxy universe is empty");
  for (const auto& [firm, spread] : universe)
    if (!(spread > 0.0)) throw InputError("proxy spread for " + firm.firm_id + " must be > 0");

  std::vector<BucketLevel> order(fallback_order.begin(), fallback_order.end());
  if (std::find(order.begin(), order.end(), BucketLevel::global) == order.end())
    order.push_back(BucketLevel::global);

  for (auto level : order) {
    CompensatedSum log_sum;
    std::size_t count = 0;
    for (const auto& [firm, spread] : universe) {
      if (!in_bucket(level, target, firm)) continue;
      log_sum.add(std::log(spread));
      ++count;
    }
    if (count > 0)
      return {std::exp(log_sum.value() / static_cast<double>(count)), level, count};
  }
  throw InputError("no proxy bucket matched");
}

double real_world_intensity(const RegressionFit& fit, double lambda_cds_proxy) {
  if (!(lambda_cds_proxy > 0.0)) throw InputError("proxy intensity must be > 0");
  return std::exp(fit.gamma0 + fit.gamma1 * std::log(lambda_cds_proxy));
}

CalibrationResult calibrate_counterparty_curve(const FirmAttributes& target,
                                               std::span<const FirmAttributes> universe,
                                               std::span<const EdfRecord> edf_panel,
                                               std::span<const CdsPanelQuote> cds_panel,
                                               const std::string& date, const MarketConfig& market,
                                               const CalibrationSettings& settings) {
  std::vector<std::pair<double, double>> pairs;
  std::vector<std::pair<FirmAttributes, double>> proxy_universe;

  for (const auto& firm : universe) {
    if (firm.firm_id == target.firm_id) continue;
    const auto quote = std::find_if(cds_panel.begin(), cds_panel.end(), [&](const auto& q) {
      return q.counterparty_id == firm.firm_id && q.date == date &&
             std::abs(q.quote.tenor - settings.anchor_tenor) < 1e-9;
    });
    const auto edf = std::find_if(edf_panel.begin(), edf_panel.end(), [&](const auto& e) {
      return e.firm_id == firm.firm_id && e.date == date;
    });
    if (quote == cds_panel.end() || edf == edf_panel.end()) continue;

    const double cleaned = run_stage("clean", [&] {
      return clean_liquidity_premium(quote->quote.spread, settings.haircut);
    });
    const double lambda_cds = run_stage("bootstrap", [&] {
      const CdsQuote q{quote->quote.tenor, cleaned, quote->quote.recovery};
      try {
        return bootstrap_intensities(std::span(&q, 1), market).intensities().front();
      } catch (const std::exception& e) {
        throw InputError("firm " + firm.firm_id + ": " + e.what());
      }
    });
    const double lambda_edf = run_stage("edf", [&] { return edf_to_intensity(edf->edf_1y); });
    pairs.emplace_back(lambda_edf, lambda_cds);
    proxy_universe.emplace_back(firm, cleaned);
  }

  CalibrationResult result;
  result.n_liquid_firms = pairs.size();
  result.fit = run_stage("regression", [&] { return fit_loglog_regression(pairs, date); });
  result.proxy = run_stage("proxy", [&] {
    return proxy_cds_spread(target, proxy_universe, settings.fallback_order);
  });
  result.lambda_cds_proxy = run_stage("proxy-bootstrap", [&] {
    const CdsQuote q{settings.anchor_tenor, result.proxy.spread, settings.recovery};
    return bootstrap_intensities(std::span(&q, 1), market).intensities().front();
  });
  result.lambda_real_world = run_stage(
      "mapping", [&] { return real_world_intensity(result.fit, result.lambda_cds_proxy); });
  result.curve = DefaultCurve::flat(result.lambda_real_world, Measure::real_world);
  return result;
}

}  // namespace cva
