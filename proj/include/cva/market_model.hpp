#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cva {

/// Probability measure a set of paths or a default curve lives under.
enum class Measure { real_world, risk_neutral };

std::string_view to_string(Measure m) noexcept;
Measure parse_measure(std::string_view token);

/// Constant-coefficient geometric Brownian motion dS = mu S dt + sigma S dW.
class GbmModel {
 public:
  GbmModel(double s0, double mu, double sigma);

  double s0() const noexcept { return s0_; }
  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double s0_;
  double mu_;
  double sigma_;
};

/// Default-free money market: bank account B_t = exp(r t).
class MarketConfig {
 public:
  explicit MarketConfig(double r);

  double r() const noexcept { return r_; }

 private:
  double r_;
};

/// Strictly increasing positive year fractions; back() is the horizon.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// n_steps equally spaced points on (0, horizon], the last exactly horizon.
  static TimeGrid uniform(double horizon, std::size_t n_steps);

  std::span<const double> times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double horizon() const noexcept { return times_.back(); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> times_;
};

/// n_paths x n_times values stored row-major (one row per path).
class PathMatrix {
 public:
  PathMatrix(std::size_t n_paths, TimeGrid grid, Measure measure);
  PathMatrix(std::vector<double> values, std::size_t n_paths, TimeGrid grid, Measure measure);

  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_times() const noexcept { return grid_.size(); }
  const TimeGrid& grid() const noexcept { return grid_; }
  Measure measure() const noexcept { return measure_; }

  double operator()(std::size_t path, std::size_t time) const {
    return values_[path * n_times() + time];
  }
  double& operator()(std::size_t path, std::size_t time) {
    return values_[path * n_times() + time];
  }

  std::span<const double> path(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * n_times(), n_times());
  }
  std::span<double> path(std::size_t i) {
    return std::span<double>(values_).subspan(i * n_times(), n_times());
  }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const PathMatrix&, const PathMatrix&) = default;

 private:
  std::vector<double> values_;
  std::size_t n_paths_;
  TimeGrid grid_;
  Measure measure_;
};

/// Exact log-normal stepping of S under the requested measure.
///
/// Path i draws its normals from CounterStream(seed, i), so the result does
/// not depend on n_threads (0 = hardware concurrency).
PathMatrix simulate_gbm_paths(const GbmModel& model, const MarketConfig& market,
                              const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                              Measure measure, std::size_t n_threads = 1);

/// Market price of risk theta = -(mu - r) / sigma.
double market_price_of_risk(const GbmModel& model, const MarketConfig& market) noexcept;

/// Density of Q* with respect to P on F_t: exp(-theta^2 t / 2 + theta W_t).
double rn_density(const GbmModel& model, const MarketConfig& market, double brownian_value,
                  double t);

/// exp(-r t).
double discount_factor(const MarketConfig& market, double t);

}  // namespace cva
