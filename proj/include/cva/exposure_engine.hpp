#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cva/market_model.hpp"

namespace cva {

enum class InstrumentKind { forward, european_call, european_put };

std::string_view to_string(InstrumentKind kind) noexcept;
InstrumentKind parse_instrument_kind(std::string_view token);

struct Instrument {
  InstrumentKind kind;
  double strike;
  double maturity;
  double notional;  // negative = short
};

/// Single netting set of instruments. Horizon is the latest maturity.
class Portfolio {
 public:
  explicit Portfolio(std::vector<Instrument> instruments);

  const std::vector<Instrument>& instruments() const noexcept { return instruments_; }
  double horizon() const noexcept { return horizon_; }

 private:
  std::vector<Instrument> instruments_;
  double horizon_;
};

/// Discounted expected positive exposure E^{Q*}[exp(-r t) V_t^+] per grid time.
struct ExposureProfile {
  TimeGrid grid;
  std::vector<double> depe;
  std::vector<double> std_error;
};

/// Black-Scholes value of a European option with time to expiry tau >= 0.
double black_scholes(InstrumentKind kind, double spot, double strike, double tau, double r,
                     double sigma);

/// Netted portfolio value at (s, t). Instruments with maturity < t have settled
/// and contribute nothing; at t == maturity an instrument is worth its payoff.
double value_portfolio_at(const Portfolio& portfolio, const MarketConfig& market,
                          const GbmModel& model, double s, double t);

/// max(V, 0) along every asset path. Accepts either measure tag; used by the
/// hedging route, where exposure variance is taken under the real-world measure.
PathMatrix exposure_scenarios(const Portfolio& portfolio, const PathMatrix& asset_paths,
                              const MarketConfig& market, const GbmModel& model,
                              std::size_t n_threads = 1);

/// max(V, 0) along risk-neutral asset paths; real-world input is a contract error.
PathMatrix positive_exposure_paths(const Portfolio& portfolio, const PathMatrix& asset_paths,
                                   const MarketConfig& market, const GbmModel& model,
                                   std::size_t n_threads = 1);

ExposureProfile epe_profile(const PathMatrix& exposure_paths, const MarketConfig& market);

}  // namespace cva
