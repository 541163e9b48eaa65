#include "cva/exposure_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cva/errors.hpp"
#include "cva/numerics.hpp"
#include "cva/parallel.hpp"

namespace cva {

std::string_view to_string(InstrumentKind kind) noexcept {
  switch (kind) {
    case InstrumentKind::forward:
      return "forward";
    case InstrumentKind::european_call:
      return "european_call";
    case InstrumentKind::european_put:
      return "european_put";
  }
  return "unknown";
}

InstrumentKind parse_instrument_kind(std::string_view token) {
  if (token == "forward") return InstrumentKind::forward;
  if (token == "european_call") return InstrumentKind::european_call;
  if (token == "european_put") return InstrumentKind::european_put;
  throw InputError("unknown instrument kind '" + std::string(token) + "'");
}

Portfolio::Portfolio(std::vector<Instrument> instruments)
    : instruments_(std::move(instruments)), horizon_(0.0) {
  if (instruments_.empty()) throw InputError("Portfolio: no instruments");
  for (const auto& inst : instruments_) {
    if (!std::isfinite(inst.maturity) || inst.maturity <= 0.0)
      throw InputError("Portfolio: maturity must be positive");
    if (!std::isfinite(inst.notional) || !std::isfinite(inst.strike))
      throw InputError("Portfolio: strike and notional must be finite");
    if (inst.kind != InstrumentKind::forward && inst.strike <= 0.0)
      throw InputError("Portfolio: option strike must be positive");
    horizon_ = std::max(horizon_, inst.maturity);
  }
}

double black_scholes(InstrumentKind kind, double spot, double strike, double tau, double r,
                     double sigma) {
  if (tau <= 0.0) {
    return kind == InstrumentKind::european_call ? std::max(spot - strike, 0.0)
                                                 : std::max(strike - spot, 0.0);
  }
  const double vol = sigma * std::sqrt(tau);
  const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  const double df = std::exp(-r * tau);
  if (kind == InstrumentKind::european_call)
    return spot * normal_cdf(d1) - strike * df * normal_cdf(d2);
  return strike * df * normal_cdf(-d2) - spot * normal_cdf(-d1);
}

double value_portfolio_at(const Portfolio& portfolio, const MarketConfig& market,
                          const GbmModel& model, double s, double t) {
  if (!(t >= 0.0) || t > portfolio.horizon())
    throw InputError("value_portfolio_at: t outside [0, horizon]");
  if (!(s > 0.0)) throw InputError("value_portfolio_at: spot must be positive");
  double value = 0.0;
  for (const auto& inst : portfolio.instruments()) {
    if (inst.maturity < t) continue;
    const double tau = inst.maturity - t;
    double unit = 0.0;
    if (inst.kind == InstrumentKind::forward)
      unit = s - inst.strike * std::exp(-market.r() * tau);
    else
      unit = black_scholes(inst.kind, s, inst.strike, tau, market.r(), model.sigma());
    value += inst.notional * unit;
  }
  return value;
}

PathMatrix exposure_scenarios(const Portfolio& portfolio, const PathMatrix& asset_paths,
                              const MarketConfig& market, const GbmModel& model,
                              std::size_t n_threads) {
  const auto& grid = asset_paths.grid();
  if (grid.horizon() > portfolio.horizon())
    throw InputError("exposure: grid extends past the portfolio horizon");
  PathMatrix out(asset_paths.n_paths(), grid, asset_paths.measure());
  parallel_for_chunks(asset_paths.n_paths(), n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto s = asset_paths.path(i);
      auto v = out.path(i);
      for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = std::max(value_portfolio_at(portfolio, market, model, s[k], grid[k]), 0.0);
    }
  });
  return out;
}

PathMatrix positive_exposure_paths(const Portfolio& portfolio, const PathMatrix& asset_paths,
                                   const MarketConfig& market, const GbmModel& model,
                                   std::size_t n_threads) {
  if (asset_paths.measure() != Measure::risk_neutral)
    throw ContractError("positive_exposure_paths: asset paths must be risk-neutral");
  return exposure_scenarios(portfolio, asset_paths, market, model, n_threads);
}

ExposureProfile epe_profile(const PathMatrix& exposure_paths, const MarketConfig& market) {
  const std::size_t n = exposure_paths.n_paths();
  if (n == 0) throw InputError("epe_profile: no paths");
  if (exposure_paths.measure() != Measure::risk_neutral)
    throw ContractError("epe_profile: exposure paths must be risk-neutral");
  for (double v : exposure_paths.values())
    if (v < 0.0) throw InputError("epe_profile: exposure paths must be nonnegative");
  const auto& grid = exposure_paths.grid();
  ExposureProfile profile{grid, std::vector<double>(grid.size()),
                          std::vector<double>(grid.size())};
  std::vector<double> column(n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double df = discount_factor(market, grid[k]);
    for (std::size_t i = 0; i < n; ++i) column[i] = df * exposure_paths(i, k);
    const auto est = mean_and_stderr(column);
    profile.depe[k] = est.mean;
    profile.std_error[k] = est.std_error;
  }
  return profile;
}

}  // namespace cva
