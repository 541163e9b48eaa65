#include "cva/cva_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cva/errors.hpp"
#include "cva/numerics.hpp"
#include "cva/parallel.hpp"
#include "cva/quadrature.hpp"

namespace cva {

std::string_view to_string(CvaMode mode) noexcept {
  return mode == CvaMode::real_world_intensity ? "real-world-intensity"
                                               : "risk-neutral-intensity";
}

std::string_view to_string(CvaRoute route) noexcept {
  switch (route) {
    case CvaRoute::discrete:
      return "discrete";
    case CvaRoute::integral:
      return "integral";
    case CvaRoute::joint_mc:
      return "joint-mc";
  }
  return "unknown";
}

CvaMode parse_cva_mode(std::string_view token) {
  if (token == "real-world-intensity") return CvaMode::real_world_intensity;
  if (token == "risk-neutral-intensity") return CvaMode::risk_neutral_intensity;
  throw ConfigError("unknown CVA mode '" + std::string(token) +
                    "' (expected real-world-intensity or risk-neutral-intensity)");
}

Measure curve_measure_for(CvaMode mode) noexcept {
  return mode == CvaMode::real_world_intensity ? Measure::real_world : Measure::risk_neutral;
}

CvaConfig::CvaConfig(double recovery, CvaMode mode) : recovery_(recovery), mode_(mode) {
  // R = 1 is accepted and yields zero CVA.
  if (!(recovery >= 0.0 && recovery <= 1.0)) throw ConfigError("recovery must be in [0, 1]");
}

double interpolate_on_grid(const TimeGrid& grid, std::span<const double> values, double t) {
  const auto times = grid.times();
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) -
                                           times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

CvaResult cva_discrete(const ExposureProfile& profile, const DefaultDistribution& dist,
                       const CvaConfig& config) {
  if (!(profile.grid == dist.grid())) throw ContractError("cva_discrete: grid mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.depe.size(); ++i)
    acc.add(profile.depe[i] * dist.probs()[i]);
  return {config.lgd() * acc.value(), config.mode(), 0.0, CvaRoute::discrete};
}

CvaResult cva_integral(const ExposureProfile& profile, const DefaultCurve& curve,
                       const CvaConfig& config) {
  if (curve.measure() != curve_measure_for(config.mode()))
    throw ContractError("cva_integral: curve is tagged " + std::string(to_string(curve.measure())) +
                        " but mode is " + std::string(to_string(config.mode())));
  const auto& grid = profile.grid;
  const double horizon = grid.horizon();

  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), grid.times().begin(), grid.times().end());
  for (double k : curve.knots())
    if (k < horizon) breaks.push_back(k);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto integrand = [&](double t) {
    return interpolate_on_grid(grid, profile.depe, t) * default_density(curve, t);
  };
  CompensatedSum acc;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s)
    acc.add(gauss_legendre5(integrand, breaks[s], breaks[s + 1]));
  return {config.lgd() * acc.value(), config.mode(), 0.0, CvaRoute::integral};
}

CvaResult cva_joint_mc(const PathMatrix& exposure_paths, std::span<const DefaultTime> default_times,
                       const MarketConfig& market, const CvaConfig& config,
                       std::size_t n_threads) {
  const std::size_t n = exposure_paths.n_paths();
  if (default_times.size() != n) throw InputError("cva_joint_mc: need one default time per path");
  if (n == 0) throw InputError("cva_joint_mc: no paths");
  if (exposure_paths.measure() != Measure::risk_neutral)
    throw ContractError("cva_joint_mc: exposure paths must be risk-neutral");
  const auto& grid = exposure_paths.grid();

  std::vector<double> losses(n, 0.0);
  parallel_for_chunks(n, n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& tau = default_times[i];
      if (!tau.occurs_by(grid.horizon())) continue;
      const double exposure = interpolate_on_grid(grid, exposure_paths.path(i), tau.time());
      losses[i] = config.lgd() * std::exp(-market.r() * tau.time()) * exposure;
    }
  });
  const auto est = mean_and_stderr(losses);
  return {est.mean, config.mode(), est.std_error, CvaRoute::joint_mc};
}

}  // namespace cva
