#include "cva/market_model.hpp"

#include <cmath>
#include <string>

#include "cva/errors.hpp"
#include "cva/parallel.hpp"
#include "cva/random.hpp"

namespace cva {

std::string_view to_string(Measure m) noexcept {
  return m == Measure::real_world ? "real-world" : "risk-neutral";
}

Measure parse_measure(std::string_view token) {
  if (token == "real-world") return Measure::real_world;
  if (token == "risk-neutral") return Measure::risk_neutral;
  throw InputError("unknown measure '" + std::string(token) +
                   "' (expected real-world or risk-neutral)");
}

GbmModel::GbmModel(double s0, double mu, double sigma) : s0_(s0), mu_(mu), sigma_(sigma) {
  if (!std::isfinite(s0) || s0 <= 0.0) throw InputError("GbmModel: s0 must be positive");
  if (!std::isfinite(mu)) throw InputError("GbmModel: mu must be finite");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw InputError("GbmModel: sigma must be strictly positive");
}

MarketConfig::MarketConfig(double r) : r_(r) {
  if (!std::isfinite(r)) throw InputError("MarketConfig: r must be finite");
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw InputError("TimeGrid: empty");
  double prev = 0.0;
  for (double t : times_) {
    if (!std::isfinite(t) || t <= prev)
      throw InputError("TimeGrid: times must be finite, positive and strictly increasing");
    prev = t;
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
  if (n_steps == 0) throw InputError("TimeGrid: n_steps must be >= 1");
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw InputError("TimeGrid: horizon must be positive");
  std::vector<double> times(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k)
    times[k] = horizon * static_cast<double>(k + 1) / static_cast<double>(n_steps);
  times.back() = horizon;
  return TimeGrid(std::move(times));
}

PathMatrix::PathMatrix(std::size_t n_paths, TimeGrid grid, Measure measure)
    : values_(n_paths * grid.size(), 0.0),
      n_paths_(n_paths),
      grid_(std::move(grid)),
      measure_(measure) {}

PathMatrix::PathMatrix(std::vector<double> values, std::size_t n_paths, TimeGrid grid,
                       Measure measure)
    : values_(std::move(values)), n_paths_(n_paths), grid_(std::move(grid)), measure_(measure) {
  if (values_.size() != n_paths_ * grid_.size())
    throw InputError("PathMatrix: value count does not match n_paths x grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("PathMatrix: non-finite entry");
}

PathMatrix simulate_gbm_paths(const GbmModel& model, const MarketConfig& market,
                              const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                              Measure measure, std::size_t n_threads) {
  if (n_paths == 0) throw InputError("simulate_gbm_paths: n_paths must be >= 1");

  const double drift = measure == Measure::real_world ? model.mu() : market.r();
  const double sigma = model.sigma();
  const auto times = grid.times();

  std::vector<double> dt(times.size());
  std::vector<double> step_drift(times.size());
  std::vector<double> step_vol(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    dt[k] = times[k] - (k == 0 ? 0.0 : times[k - 1]);
    step_drift[k] = (drift - 0.5 * sigma * sigma) * dt[k];
    step_vol[k] = sigma * std::sqrt(dt[k]);
  }

  PathMatrix out(n_paths, grid, measure);
  parallel_for_chunks(n_paths, n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CounterStream stream(seed, i);
      auto row = out.path(i);
      double log_s = std::log(model.s0());
      for (std::size_t k = 0; k < row.size(); ++k) {
        log_s += step_drift[k] + step_vol[k] * stream.normal();
        row[k] = std::exp(log_s);
      }
    }
  });
  return out;
}

double market_price_of_risk(const GbmModel& model, const MarketConfig& market) noexcept {
  return -(model.mu() - market.r()) / model.sigma();
}

double rn_density(const GbmModel& model, const MarketConfig& market, double brownian_value,
                  double t) {
  if (!(t >= 0.0)) throw InputError("rn_density: t must be >= 0");
  const double theta = market_price_of_risk(model, market);
  return std::exp(-0.5 * theta * theta * t + theta * brownian_value);
}

double discount_factor(const MarketConfig& market, double t) {
  if (!(t >= 0.0)) throw InputError("discount_factor: t must be >= 0");
  return std::exp(-market.r() * t);
}

}  // namespace cva
