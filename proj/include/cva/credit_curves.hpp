#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cva/market_model.hpp"

namespace cva {

/// Piecewise-constant default intensity.
///
/// Segment k covers [knots[k-1], knots[k]) with knots[-1] = 0; the last
/// intensity also applies beyond knots.back(), which may be +infinity.
class DefaultCurve {
 public:
  DefaultCurve(std::vector<double> knots, std::vector<double> intensities, Measure measure);

  static DefaultCurve flat(double intensity, Measure measure);

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> intensities() const noexcept { return intensities_; }
  Measure measure() const noexcept { return measure_; }

  /// Right-continuous intensity lambda(t).
  double intensity_at(double t) const;
  /// Integral of lambda over [0, t].
  double cumulative_hazard(double t) const;

 private:
  std::vector<double> knots_;
  std::vector<double> intensities_;
  Measure measure_;
};

/// A sampled default time; never() marks survival past any horizon.
class DefaultTime {
 public:
  static constexpr DefaultTime never() noexcept {
    return DefaultTime(std::numeric_limits<double>::infinity());
  }
  static DefaultTime at(double t);

  bool occurred() const noexcept { return time_ != std::numeric_limits<double>::infinity(); }
  bool occurs_by(double horizon) const noexcept { return time_ <= horizon; }
  /// Only meaningful when occurred().
  double time() const noexcept { return time_; }

  friend bool operator==(const DefaultTime&, const DefaultTime&) = default;

 private:
  constexpr explicit DefaultTime(double t) noexcept : time_(t) {}
  double time_;
};

struct CdsQuote {
  double tenor;
  double spread;    // decimal per year
  double recovery;  // in [0, 1)
};

double survival(const DefaultCurve& curve, double t);
double default_density(const DefaultCurve& curve, double t);

/// Inverse-CDF sampling; draw i uses CounterStream(seed, i).
std::vector<DefaultTime> sample_default_times(const DefaultCurve& curve, std::size_t n,
                                              std::uint64_t seed);

struct CdsLegs {
  double protection;  // (1 - R) * integral of exp(-r t) f(t) over [0, tenor]
  double annuity;     // quarterly premium annuity incl. half-period accrual on default
};

CdsLegs cds_legs(const DefaultCurve& curve, const MarketConfig& market, double tenor,
                 double recovery);

double price_cds_par_spread(const DefaultCurve& curve, const MarketConfig& market, double tenor,
                            double recovery);

/// Sequential bisection for each segment's flat intensity; knots at quote tenors.
DefaultCurve bootstrap_intensities(std::span<const CdsQuote> quotes, const MarketConfig& market);

inline constexpr double kBootstrapMaxIntensity = 10.0;

}  // namespace cva
