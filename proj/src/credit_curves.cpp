#include "cva/credit_curves.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "cva/errors.hpp"
#include "cva/random.hpp"

namespace cva {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPremiumPeriod = 0.25;
constexpr double kQuadratureTolerance = 1e-10;
// Bracket width at which bisection stops; well inside the 1e-12 intensity
// tolerance so per-firm intensities feed the log-log regression cleanly.
constexpr double kBisectionWidth = 1e-15;
constexpr double kZeroSpreadSlack = 1e-12;

std::string format_tenor(double tenor) {
  std::ostringstream os;
  os << tenor << "y";
  return os.str();
}

}  // namespace

DefaultCurve::DefaultCurve(std::vector<double> knots, std::vector<double> intensities,
                           Measure measure)
    : knots_(std::move(knots)), intensities_(std::move(intensities)), measure_(measure) {
  if (intensities_.empty()) throw InputError("DefaultCurve: no segments");
  if (knots_.size() != intensities_.size())
    throw InputError("DefaultCurve: need one knot per intensity");
  double prev = 0.0;
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    const bool last = k + 1 == knots_.size();
    if (std::isnan(knots_[k]) || knots_[k] <= prev || (!last && !std::isfinite(knots_[k])))
      throw InputError("DefaultCurve: knots must be positive and strictly increasing");
    prev = knots_[k];
  }
  for (double l : intensities_)
    if (!std::isfinite(l) || l < 0.0) throw InputError("DefaultCurve: intensities must be >= 0");
}

DefaultCurve DefaultCurve::flat(double intensity, Measure measure) {
  return DefaultCurve({kInf}, {intensity}, measure);
}

double DefaultCurve::intensity_at(double t) const {
  if (!(t >= 0.0)) throw InputError("DefaultCurve: t must be >= 0");
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.end()) return intensities_.back();
  return intensities_[static_cast<std::size_t>(it - knots_.begin())];
}

double DefaultCurve::cumulative_hazard(double t) const {
  if (!(t >= 0.0)) throw InputError("DefaultCurve: t must be >= 0");
  double hazard = 0.0;
  double start = 0.0;
  for (std::size_t k = 0; k < knots_.size() && start < t; ++k) {
    const bool last = k + 1 == knots_.size();
    const double end = last ? t : std::min(knots_[k], t);
    hazard += intensities_[k] * (end - start);
    start = end;
  }
  return hazard;
}

DefaultTime DefaultTime::at(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("DefaultTime: time must be finite and >= 0");
  return DefaultTime(t);
}

double survival(const DefaultCurve& curve, double t) {
  if (!(t >= 0.0)) throw InputError("survival: t must be >= 0");
  return std::exp(-curve.cumulative_hazard(t));
}

double default_density(const DefaultCurve& curve, double t) {
  return curve.intensity_at(t) * survival(curve, t);
}

std::vector<DefaultTime> sample_default_times(const DefaultCurve& curve, std::size_t n,
                                              std::uint64_t seed) {
  if (n == 0) throw InputError("sample_default_times: n must be >= 1");
  const auto knots = curve.knots();
  const auto lambdas = curve.intensities();
  std::vector<DefaultTime> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterStream stream(seed, i);
    double remaining = -std::log(stream.uniform());
    double start = 0.0;
    DefaultTime tau = DefaultTime::never();
    for (std::size_t k = 0; k < knots.size(); ++k) {
      const bool last = k + 1 == knots.size();
      const double width = last ? kInf : knots[k] - start;
      const double mass = lambdas[k] * width;
      if (lambdas[k] > 0.0 && remaining <= mass) {
        tau = DefaultTime::at(start + remaining / lambdas[k]);
        break;
      }
      if (!last) remaining -= mass;
      start = last ? start : knots[k];
    }
    out.push_back(tau);
  }
  return out;
}

CdsLegs cds_legs(const DefaultCurve& curve, const MarketConfig& market, double tenor,
                 double recovery) {
  if (!std::isfinite(tenor) || tenor <= 0.0) throw InputError("CDS tenor must be positive");
  if (!(recovery >= 0.0 && recovery < 1.0)) throw InputError("CDS recovery must be in [0, 1)");
  const double r = market.r();

  // Protection leg, integrated piecewise between knots so the integrand is smooth.
  double protection = 0.0;
  double start = 0.0;
  for (std::size_t k = 0; k < curve.knots().size() && start < tenor; ++k) {
    const double end = std::min(curve.knots()[k], tenor);
    const double lambda = curve.intensities()[k];
    if (lambda > 0.0) {
      const double h0 = curve.cumulative_hazard(start);
      auto integrand = [&](double t) {
        return std::exp(-r * t) * lambda * std::exp(-(h0 + lambda * (t - start)));
      };
      protection += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          integrand, start, end, 15, kQuadratureTolerance);
    }
    start = end;
  }
  protection *= 1.0 - recovery;

  double annuity = 0.0;
  double prev_t = 0.0;
  double prev_s = 1.0;
  for (int j = 1; prev_t < tenor; ++j) {
    double t = j * kPremiumPeriod;
    if (t > tenor - 1e-12) t = tenor;
    const double delta = t - prev_t;
    const double df = std::exp(-r * t);
    const double s = survival(curve, t);
    annuity += delta * df * s + 0.5 * delta * df * (prev_s - s);
    prev_t = t;
    prev_s = s;
  }
  return {protection, annuity};
}

double price_cds_par_spread(const DefaultCurve& curve, const MarketConfig& market, double tenor,
                            double recovery) {
  const auto legs = cds_legs(curve, market, tenor, recovery);
  return legs.protection / legs.annuity;
}

DefaultCurve bootstrap_intensities(std::span<const CdsQuote> quotes, const MarketConfig& market) {
  if (quotes.empty()) throw InputError("bootstrap: no quotes");
  const double recovery = quotes.front().recovery;
  double prev_tenor = 0.0;
  for (const auto& q : quotes) {
    if (!std::isfinite(q.tenor) || q.tenor <= prev_tenor)
      throw InputError("bootstrap: tenors must be positive and strictly increasing");
    if (!std::isfinite(q.spread) || q.spread < 0.0)
      throw InputError("bootstrap: spread must be >= 0 at " + format_tenor(q.tenor));
    if (q.recovery != recovery) throw InputError("bootstrap: recovery must be uniform");
    prev_tenor = q.tenor;
  }

  std::vector<double> knots;
  std::vector<double> lambdas;
  for (const auto& q : quotes) {
    knots.push_back(q.tenor);
    lambdas.push_back(0.0);
    auto excess = [&](double lambda) {
      lambdas.back() = lambda;
      const DefaultCurve trial(knots, lambdas, Measure::risk_neutral);
      return price_cds_par_spread(trial, market, q.tenor, recovery) - q.spread;
    };
    const double at_zero = excess(0.0);
    if (at_zero >= 0.0) {
      if (at_zero > kZeroSpreadSlack)
        throw BootstrapError(q.tenor, "bootstrap failed at tenor " + format_tenor(q.tenor) +
                                          ": spread implies a negative intensity");
      lambdas.back() = 0.0;
      continue;
    }
    if (excess(kBootstrapMaxIntensity) < 0.0)
      throw BootstrapError(q.tenor, "bootstrap failed at tenor " + format_tenor(q.tenor) +
                                        ": spread implies intensity above 10");
    double lo = 0.0;
    double hi = kBootstrapMaxIntensity;
    while (hi - lo > kBisectionWidth) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (excess(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    lambdas.back() = 0.5 * (lo + hi);
  }
  return DefaultCurve(std::move(knots), std::move(lambdas), Measure::risk_neutral);
}

}  // namespace cva
