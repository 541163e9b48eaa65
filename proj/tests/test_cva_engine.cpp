#include "cva/cva_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "cva/errors.hpp"
#include "cva/random.hpp"
#include "oracles.hpp"

namespace cva {
namespace {

ExposureProfile make_profile(TimeGrid grid, std::vector<double> depe) {
  std::vector<double> se(depe.size(), 0.0);
  return {std::move(grid), std::move(depe), std::move(se)};
}

// V_t^+ = 1 on every grid point, so DEPE(t) = exp(-r t).
ExposureProfile unit_exposure_profile(double r, const TimeGrid& grid) {
  std::vector<double> depe;
  for (double t : grid.times()) depe.push_back(std::exp(-r * t));
  return make_profile(grid, std::move(depe));
}

const CvaConfig kRw(0.4, CvaMode::real_world_intensity);

TEST(CvaConfigTest, Validation) {
  EXPECT_NO_THROW(CvaConfig(0.0, CvaMode::real_world_intensity));
  EXPECT_NO_THROW(CvaConfig(1.0, CvaMode::real_world_intensity));
  EXPECT_THROW(CvaConfig(-0.01, CvaMode::real_world_intensity), ConfigError);
  EXPECT_THROW(CvaConfig(1.01, CvaMode::real_world_intensity), ConfigError);
  EXPECT_EQ(parse_cva_mode("risk-neutral-intensity"), CvaMode::risk_neutral_intensity);
  EXPECT_THROW(parse_cva_mode("rn"), ConfigError);
  EXPECT_EQ(curve_measure_for(CvaMode::real_world_intensity), Measure::real_world);
}

TEST(CvaDiscreteTest, Examples) {
  const TimeGrid grid({1.0, 2.0});
  const auto profile = make_profile(grid, {2.0, 1.5});
  const DefaultDistribution dist(grid, {0.01, 0.01});
  const auto res = cva_discrete(profile, dist, kRw);
  EXPECT_NEAR(res.value, 0.021, 1e-16);
  EXPECT_EQ(res.route, CvaRoute::discrete);
  EXPECT_EQ(res.mode, CvaMode::real_world_intensity);

  EXPECT_EQ(cva_discrete(profile, dist, CvaConfig(1.0, CvaMode::real_world_intensity)).value, 0.0);
  EXPECT_EQ(cva_discrete(profile, DefaultDistribution(grid, {0.0, 0.0}), kRw).value, 0.0);
}

TEST(CvaDiscreteTest, GridMismatch) {
  const auto profile = make_profile(TimeGrid({1.0, 2.0}), {2.0, 1.5});
  const DefaultDistribution dist(TimeGrid({1.0, 3.0}), {0.01, 0.01});
  EXPECT_THROW(cva_discrete(profile, dist, kRw), ContractError);
}

TEST(CvaDiscreteTest, EqualsScaledHedgeCost) {
  const auto grid = TimeGrid::uniform(5.0, 40);
  std::vector<double> depe;
  for (std::size_t i = 0; i < grid.size(); ++i) depe.push_back(1.0 + std::sin(grid[i]));
  const auto profile = make_profile(grid, depe);
  const auto dist =
      discretize_default_distribution(DefaultCurve::flat(0.03, Measure::real_world), grid);
  const HedgePortfolio hedge{grid, {dist.probs().begin(), dist.probs().end()}, 0.0, false};
  EXPECT_EQ(cva_discrete(profile, dist, kRw).value, kRw.lgd() * hedge_cost(hedge, profile));
}

TEST(CvaIntegralTest, ZeroIntensity) {
  const auto grid = TimeGrid::uniform(5.0, 50);
  EXPECT_EQ(cva_integral(unit_exposure_profile(0.03, grid),
                         DefaultCurve::flat(0.0, Measure::real_world), kRw)
                .value,
            0.0);
}

TEST(CvaIntegralTest, UnitExposureClosedForm) {
  const double expected = oracle::unit_exposure_cva(0.02, 0.03, 0.4, 5.0);
  EXPECT_NEAR(expected, 0.0530879, 1e-7);
  const auto curve = DefaultCurve::flat(0.02, Measure::real_world);
  // Flat DEPE before the first grid point costs O(r dt); a fine grid brings it below 1e-8.
  const auto fine = TimeGrid::uniform(5.0, 4000);
  const auto res = cva_integral(unit_exposure_profile(0.03, fine), curve, kRw);
  EXPECT_NEAR(res.value, expected, 1e-8);
  EXPECT_EQ(res.route, CvaRoute::integral);

  EXPECT_EQ(cva_integral(unit_exposure_profile(0.03, fine), curve,
                         CvaConfig(1.0, CvaMode::real_world_intensity))
                .value,
            0.0);
}

TEST(CvaIntegralTest, PiecewiseCurveMatchesSimpson) {
  const DefaultCurve curve({1.5, 3.2, 5.0}, {0.01, 0.04, 0.02}, Measure::risk_neutral);
  const auto grid = TimeGrid::uniform(5.0, 20);
  std::vector<double> depe;
  for (double t : grid.times()) depe.push_back(1.0 + 0.3 * t);  // linear, so interpolation is exact
  const auto profile = make_profile(grid, depe);
  const CvaConfig config(0.25, CvaMode::risk_neutral_intensity);
  const double h1 = 0.01 * 1.5, h2 = h1 + 0.04 * 1.7;
  auto density = [&](double t) {
    if (t < 1.5) return 0.01 * std::exp(-0.01 * t);
    if (t < 3.2) return 0.04 * std::exp(-h1 - 0.04 * (t - 1.5));
    return 0.02 * std::exp(-h2 - 0.02 * (t - 3.2));
  };
  const double t1 = grid[0];
  auto depe_fn = [&](double t) { return 1.0 + 0.3 * std::max(t, t1); };
  auto f = [&](double t) { return depe_fn(t) * density(t); };
  auto below = [](double x) { return std::nextafter(x, 0.0); };
  const double expected =
      0.75 * (oracle::simpson(f, 0.0, t1) + oracle::simpson(f, t1, below(1.5)) +
              oracle::simpson(f, 1.5, below(3.2)) + oracle::simpson(f, 3.2, 5.0));
  EXPECT_NEAR(cva_integral(profile, curve, config).value, expected, 1e-12);
}

TEST(CvaIntegralTest, MeasureMismatch) {
  const auto grid = TimeGrid::uniform(1.0, 4);
  const auto profile = unit_exposure_profile(0.0, grid);
  EXPECT_THROW(cva_integral(profile, DefaultCurve::flat(0.02, Measure::risk_neutral), kRw),
               ContractError);
  EXPECT_THROW(cva_integral(profile, DefaultCurve::flat(0.02, Measure::real_world),
                            CvaConfig(0.4, CvaMode::risk_neutral_intensity)),
               ContractError);
}

TEST(CvaInvariantTest, DiscreteMatchesIntegralOnFineGrid) {
  const double r = 0.03;
  for (std::size_t n : {200u, 500u}) {
    const auto grid = TimeGrid::uniform(5.0, n);
    for (double lambda : {0.005, 0.02, 0.1}) {
      const auto curve = DefaultCurve::flat(lambda, Measure::real_world);
      const auto profile = unit_exposure_profile(r, grid);
      const double disc =
          cva_discrete(profile, discretize_default_distribution(curve, grid), kRw).value;
      const double integ = cva_integral(profile, curve, kRw).value;
      EXPECT_LE(std::abs(disc - integ), 0.01 * integ) << n << " " << lambda;
    }
  }
}

TEST(CvaInvariantTest, LgdLinearity) {
  const auto grid = TimeGrid::uniform(3.0, 30);
  const auto profile = unit_exposure_profile(0.02, grid);
  const auto curve = DefaultCurve::flat(0.05, Measure::real_world);
  const auto dist = discretize_default_distribution(curve, grid);
  const CvaConfig full(0.0, CvaMode::real_world_intensity);
  const CvaConfig part(0.35, CvaMode::real_world_intensity);
  EXPECT_NEAR(cva_discrete(profile, dist, part).value, 0.65 * cva_discrete(profile, dist, full).value,
              1e-16);
  EXPECT_NEAR(cva_integral(profile, curve, part).value,
              0.65 * cva_integral(profile, curve, full).value, 1e-16);

  const PathMatrix ones(std::vector<double>(100 * grid.size(), 1.0), 100, grid,
                        Measure::risk_neutral);
  const auto taus = sample_default_times(curve, 100, 9);
  const MarketConfig market(0.02);
  EXPECT_NEAR(cva_joint_mc(ones, taus, market, part).value,
              0.65 * cva_joint_mc(ones, taus, market, full).value, 1e-16);
}

TEST(CvaInvariantTest, MonotoneInIntensity) {
  const auto grid = TimeGrid::uniform(5.0, 100);
  const auto profile = unit_exposure_profile(0.03, grid);
  double prev = -1.0;
  for (double lambda = 0.0; lambda <= 1.0; lambda += 0.05) {
    const double v = cva_integral(profile, DefaultCurve::flat(lambda, Measure::real_world), kRw).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(CvaJointMcTest, NoDefaults) {
  const auto grid = TimeGrid::uniform(1.0, 4);
  const PathMatrix paths(std::vector<double>(3 * 4, 2.0), 3, grid, Measure::risk_neutral);
  const std::vector<DefaultTime> taus(3, DefaultTime::never());
  const auto res = cva_joint_mc(paths, taus, MarketConfig(0.03), kRw);
  EXPECT_EQ(res.value, 0.0);
  EXPECT_EQ(res.std_error, 0.0);
  EXPECT_EQ(res.route, CvaRoute::joint_mc);
}

TEST(CvaJointMcTest, SinglePathAtGridPoint) {
  const TimeGrid grid({0.5, 1.0, 1.5});
  const PathMatrix paths({3.0, 7.0, 0.0}, 1, grid, Measure::risk_neutral);
  const std::vector<DefaultTime> taus{DefaultTime::at(1.0)};
  EXPECT_EQ(cva_joint_mc(paths, taus, MarketConfig(0.03), kRw).value,
            0.6 * std::exp(-0.03 * 1.0) * 7.0);
  // Between grid points the path value is interpolated linearly.
  const std::vector<DefaultTime> mid{DefaultTime::at(0.75)};
  EXPECT_NEAR(cva_joint_mc(paths, mid, MarketConfig(0.0), kRw).value, 0.6 * 5.0, 1e-15);
  // Past the horizon nothing is lost.
  const std::vector<DefaultTime> late{DefaultTime::at(2.0)};
  EXPECT_EQ(cva_joint_mc(paths, late, MarketConfig(0.0), kRw).value, 0.0);
}

TEST(CvaJointMcTest, Errors) {
  const auto grid = TimeGrid::uniform(1.0, 2);
  const PathMatrix rn(std::vector<double>(4, 1.0), 2, grid, Measure::risk_neutral);
  const PathMatrix rw(std::vector<double>(4, 1.0), 2, grid, Measure::real_world);
  const std::vector<DefaultTime> one{DefaultTime::never()};
  const std::vector<DefaultTime> two(2, DefaultTime::never());
  EXPECT_THROW(cva_joint_mc(rn, one, MarketConfig(0.0), kRw), InputError);
  EXPECT_THROW(cva_joint_mc(rw, two, MarketConfig(0.0), kRw), ContractError);
}

TEST(CvaJointMcTest, UnitExposureWithinThreeStandardErrors) {
  const std::size_t n = 100000;
  const auto grid = TimeGrid::uniform(5.0, 50);
  const PathMatrix ones(std::vector<double>(n * grid.size(), 1.0), n, grid, Measure::risk_neutral);
  const auto taus = sample_default_times(DefaultCurve::flat(0.02, Measure::real_world), n, 2024);
  const auto res = cva_joint_mc(ones, taus, MarketConfig(0.03), kRw, 2);
  const double expected = oracle::unit_exposure_cva(0.02, 0.03, 0.4, 5.0);
  EXPECT_GT(res.std_error, 0.0);
  EXPECT_LE(std::abs(res.value - expected), 3.0 * res.std_error);
  // Thread count does not change the estimate.
  EXPECT_EQ(cva_joint_mc(ones, taus, MarketConfig(0.03), kRw, 1).value, res.value);
}

TEST(CvaRouteConsistencyTest, ForwardAgainstExactProfile) {
  // Long forward, K = 100, T = 1: DEPE(t) is a call on S_t struck at K exp(-r (T - t)).
  const double r = 0.03, sigma = 0.2, s0 = 100.0, strike = 100.0, maturity = 1.0;
  const GbmModel model(s0, 0.07, sigma);
  const MarketConfig market(r);
  const Portfolio book({{InstrumentKind::forward, strike, maturity, 1.0}});
  const auto grid = TimeGrid::uniform(maturity, 25);
  std::vector<double> depe;
  for (double t : grid.times())
    depe.push_back(oracle::call_by_quadrature(s0, strike * std::exp(-r * (maturity - t)), t, r, sigma));
  const auto profile = make_profile(grid, depe);
  const CvaConfig config(0.4, CvaMode::risk_neutral_intensity);
  const auto curve = DefaultCurve::flat(0.05, Measure::risk_neutral);
  const double integral = cva_integral(profile, curve, config).value;

  const std::size_t n = 100000;
  const auto paths = simulate_gbm_paths(model, market, grid, n, 77, Measure::risk_neutral);
  const auto exposure = positive_exposure_paths(book, paths, market, model);
  const auto taus = sample_default_times(curve, n, derive_seed(77, kDefaultTimeFamily));
  const auto mc = cva_joint_mc(exposure, taus, market, config);
  EXPECT_LE(std::abs(mc.value - integral), 3.0 * mc.std_error)
      << mc.value << " vs " << integral << " se " << mc.std_error;
}

TEST(InterpolateOnGridTest, Conventions) {
  const TimeGrid grid({1.0, 2.0, 4.0});
  const std::vector<double> v{1.0, 3.0, -1.0};
  EXPECT_EQ(interpolate_on_grid(grid, v, 0.2), 1.0);
  EXPECT_EQ(interpolate_on_grid(grid, v, 1.5), 2.0);
  EXPECT_EQ(interpolate_on_grid(grid, v, 3.0), 1.0);
  EXPECT_EQ(interpolate_on_grid(grid, v, 4.0), -1.0);
  EXPECT_EQ(interpolate_on_grid(grid, v, 2.0), 3.0);
}

}  // namespace
}  // namespace cva
