#pragma once

#include <span>
#include <string_view>

#include "cva/credit_curves.hpp"
#include "cva/exposure_engine.hpp"
#include "cva/hedge_solver.hpp"
#include "cva/market_model.hpp"

namespace cva {

/// Which default intensity enters the pricing integral.
///  - real_world_intensity: minimal martingale measure Q0 (no CDS hedge available)
///  - risk_neutral_intensity: CDS-implied intensity (liquid CDS available)
enum class CvaMode { real_world_intensity, risk_neutral_intensity };

enum class CvaRoute { discrete, integral, joint_mc };

std::string_view to_string(CvaMode mode) noexcept;
std::string_view to_string(CvaRoute route) noexcept;
CvaMode parse_cva_mode(std::string_view token);

/// Measure a default curve must carry to be used under the given mode.
Measure curve_measure_for(CvaMode mode) noexcept;

class CvaConfig {
 public:
  CvaConfig(double recovery, CvaMode mode);

  double recovery() const noexcept { return recovery_; }
  double lgd() const noexcept { return 1.0 - recovery_; }
  CvaMode mode() const noexcept { return mode_; }

 private:
  double recovery_;
  CvaMode mode_;
};

struct CvaResult {
  double value = 0.0;
  CvaMode mode = CvaMode::real_world_intensity;
  double std_error = 0.0;
  CvaRoute route = CvaRoute::discrete;
};

/// (1 - R) * sum_i DEPE(t_i) * p_i.
CvaResult cva_discrete(const ExposureProfile& profile, const DefaultDistribution& dist,
                       const CvaConfig& config);

/// (1 - R) * integral over [0, T] of DEPE(t) f(t) dt, with DEPE linear between grid
/// points and flat before t_1. Five-point Gauss-Legendre per segment of the union
/// of grid points and curve knots.
CvaResult cva_integral(const ExposureProfile& profile, const DefaultCurve& curve,
                       const CvaConfig& config);

/// Sample mean of (1 - R) exp(-r tau) V^+(tau) pairing path i with default time i.
CvaResult cva_joint_mc(const PathMatrix& exposure_paths, std::span<const DefaultTime> default_times,
                       const MarketConfig& market, const CvaConfig& config,
                       std::size_t n_threads = 1);

/// Piecewise-linear interpolation of grid values, flat before the first point.
double interpolate_on_grid(const TimeGrid& grid, std::span<const double> values, double t);

}  // namespace cva
