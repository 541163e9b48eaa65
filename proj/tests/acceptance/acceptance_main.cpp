// Acceptance suite. One line per criterion: PASS/FAIL, name, measured figures.
// Tolerances and runtime limits are fixed below; seeds are fixed constants.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_fixtures.hpp"
#include "cva/credit_curves.hpp"
#include "cva/cva_engine.hpp"
#include "cva/exposure_engine.hpp"
#include "cva/hedge_solver.hpp"
#include "cva/market_model.hpp"
#include "cva/numerics.hpp"
#include "cva/pd_calibration.hpp"
#include "cva/random.hpp"
#include "oracles.hpp"

namespace {

using namespace cva;

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr double kHedgeTol = 1e-10;
constexpr double kClosedFormTol = 1e-8;
constexpr double kDiscreteRelTol = 0.01;
constexpr double kBootstrapIntensityTol = 1e-8;
constexpr double kRepricingTol = 1e-10;
constexpr double kRegressionTol = 1e-10;
constexpr double kRealWorldIntensityTol = 1e-8;
constexpr double kStdErrors = 3.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// ---------------------------------------------------------------- 1

Outcome hedge_equals_probabilities() {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(2, 20);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    std::vector<double> b(n * n);
    for (double& x : b) x = normal(rng);
    std::vector<double> sigma(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = i == j ? 0.1 : 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
        sigma[i * n + j] = s;
      }
    std::vector<double> times(n), probs(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      times[i] = 0.5 * static_cast<double>(i + 1);
      probs[i] = unit(rng);
      total += probs[i];
    }
    const double scale = unit(rng) / total;  // total mass in (0, 1)
    for (double& p : probs) p *= scale;
    const TimeGrid grid(times);
    const CovMatrix cov{grid, sigma};
    const DefaultDistribution dist(grid, probs);
    const auto h = solve_min_variance_hedge(cov, pe_covariance_analytic(cov, dist));
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(h.positions[i] - probs[i]));
  }
  return {worst <= kHedgeTol, "max |h - P| = " + fmt(worst) + " (tol " + fmt(kHedgeTol) + ")"};
}

// ---------------------------------------------------------------- 2

Outcome empirical_hedge_convergence() {
  const GbmModel model(100.0, 0.08, 0.25);
  const MarketConfig market(0.03);
  const Portfolio book({{InstrumentKind::european_call, 100.0, 2.0, 1.0},
                        {InstrumentKind::forward, 95.0, 1.0, 0.5}});
  const auto grid = TimeGrid::uniform(2.0, 10);
  const auto curve = DefaultCurve::flat(0.15, Measure::real_world);
  const std::size_t n = 100000;
  const std::uint64_t seed = 20240601;
  const auto paths = simulate_gbm_paths(model, market, grid, n, seed, Measure::real_world);
  const auto exposure = exposure_scenarios(book, paths, market, model);
  const auto defaults = sample_default_times(curve, n, derive_seed(seed, kDefaultTimeFamily));
  const auto h = solve_min_variance_hedge(covariance_matrix(exposure),
                                          pe_covariance_empirical(exposure, defaults, grid));
  const auto dist = discretize_default_distribution(curve, grid);
  const auto boot = bootstrap_hedge_errors(exposure, defaults, 200, derive_seed(seed, kBootstrapFamily));
  double worst_z = 0.0;
  bool pass = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double diff = std::abs(h.positions[i] - dist.probs()[i]);
    pass = pass && diff <= kStdErrors * boot.hedge_std_error[i];
    worst_z = std::max(worst_z, diff / boot.hedge_std_error[i]);
  }
  std::ostringstream os;
  os.precision(3);
  os << "max |h - P| / bootstrap se = " << worst_z << " over " << grid.size() << " points (limit 3)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 3

Outcome route_consistency() {
  const GbmModel model(100.0, 0.06, 0.3);
  const MarketConfig market(0.02);
  const CvaConfig config(0.4, CvaMode::real_world_intensity);
  const auto curve = DefaultCurve::flat(0.04, Measure::real_world);
  const std::size_t n = 100000;
  struct Fixture {
    const char* name;
    Portfolio book;
  };
  const std::vector<Fixture> fixtures = {
      {"forward", Portfolio({{InstrumentKind::forward, 100.0, 2.0, 1.0}})},
      {"call", Portfolio({{InstrumentKind::european_call, 110.0, 1.5, 1.0}})},
      {"book", Portfolio({{InstrumentKind::forward, 100.0, 3.0, 1.0},
                          {InstrumentKind::european_call, 120.0, 2.0, -1.0},
                          {InstrumentKind::european_put, 90.0, 1.0, 2.0},
                          {InstrumentKind::forward, 95.0, 0.5, -0.5}})}};
  bool pass = true;
  std::ostringstream os;
  os.precision(3);
  std::uint64_t seed = 7001;
  for (const auto& f : fixtures) {
    const auto grid = TimeGrid::uniform(f.book.horizon(), 60);
    const auto paths = simulate_gbm_paths(model, market, grid, n, seed, Measure::risk_neutral);
    const auto exposure = positive_exposure_paths(f.book, paths, market, model);
    const auto integral = cva_integral(epe_profile(exposure, market), curve, config);
    const auto taus = sample_default_times(curve, n, derive_seed(seed, kDefaultTimeFamily));
    const auto mc = cva_joint_mc(exposure, taus, market, config);
    const double z = std::abs(integral.value - mc.value) / mc.std_error;
    pass = pass && z <= kStdErrors;
    os << f.name << " z=" << z << " ";
    ++seed;
  }
  os << "(limit 3)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 4

ExposureProfile unit_profile(double r, const TimeGrid& grid) {
  ExposureProfile p{grid, {}, std::vector<double>(grid.size(), 0.0)};
  for (double t : grid.times()) p.depe.push_back(std::exp(-r * t));
  return p;
}

Outcome closed_form_cva() {
  const double r = 0.03, lambda = 0.02, recovery = 0.4, horizon = 5.0;
  const double expected = oracle::unit_exposure_cva(lambda, r, recovery, horizon);
  const CvaConfig config(recovery, CvaMode::real_world_intensity);
  const auto curve = DefaultCurve::flat(lambda, Measure::real_world);
  // The flat-before-first-point convention costs about 1.8e-8 at 500 points, so the
  // integral route runs on a finer grid.
  const auto fine = TimeGrid::uniform(horizon, 4000);
  const double integral = cva_integral(unit_profile(r, fine), curve, config).value;
  const auto coarse = TimeGrid::uniform(horizon, 500);
  const double discrete = cva_discrete(unit_profile(r, coarse),
                                       discretize_default_distribution(curve, coarse), config)
                              .value;
  const double err_int = std::abs(integral - expected);
  const double rel_disc = std::abs(discrete - expected) / expected;
  return {err_int <= kClosedFormTol && rel_disc <= kDiscreteRelTol,
          "oracle " + fmt(expected) + ", integral err " + fmt(err_int) + " (tol 1e-08), discrete rel err " +
              fmt(rel_disc) + " (tol 1e-02)"};
}

// ---------------------------------------------------------------- 5

Outcome bootstrap_round_trip() {
  const std::vector<double> tenors{1.0, 3.0, 5.0, 7.0, 10.0};
  const std::vector<double> inner{1.0, 3.0, 5.0, 7.0};
  const MarketConfig market(0.025);
  std::mt19937_64 rng(5005);
  std::uniform_int_distribution<int> segments(1, 5);
  std::uniform_real_distribution<double> log_lambda(std::log(0.0005), std::log(0.2));
  double worst_lambda = 0.0, worst_price = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto breaks = inner;
    std::shuffle(breaks.begin(), breaks.end(), rng);
    breaks.resize(static_cast<std::size_t>(segments(rng) - 1));
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(10.0);
    std::vector<double> lambdas;
    for (std::size_t k = 0; k < breaks.size(); ++k) lambdas.push_back(std::exp(log_lambda(rng)));
    const DefaultCurve truth(breaks, lambdas, Measure::risk_neutral);
    std::vector<CdsQuote> quotes;
    for (double t : tenors) quotes.push_back({t, price_cds_par_spread(truth, market, t, 0.4), 0.4});
    const auto fitted = bootstrap_intensities(quotes, market);
    double prev = 0.0;
    for (double t : tenors) {
      const double mid = 0.5 * (prev + t);
      worst_lambda = std::max(worst_lambda, std::abs(fitted.intensity_at(mid) - truth.intensity_at(mid)));
      prev = t;
    }
    for (const auto& q : quotes)
      worst_price =
          std::max(worst_price, std::abs(price_cds_par_spread(fitted, market, q.tenor, 0.4) - q.spread));
  }
  return {worst_lambda <= kBootstrapIntensityTol && worst_price <= kRepricingTol,
          "max intensity err " + fmt(worst_lambda) + " (tol 1e-08), max repricing err " +
              fmt(worst_price) + " (tol 1e-10)"};
}

// ---------------------------------------------------------------- 6

Outcome martingale_suite() {
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 100000;
  bool pass = true;
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    const double r = 0.05 * u(rng);
    const double sigma = 0.15 + 0.25 * u(rng);
    const double mu = r - 0.1 + 0.25 * u(rng);
    const double horizon = 0.5 + 1.5 * u(rng);
    const GbmModel model(50.0 + 100.0 * u(rng), mu, sigma);
    const MarketConfig market(r);
    const auto grid = TimeGrid::uniform(horizon, 8);
    const auto seed = static_cast<std::uint64_t>(9100 + set);
    const auto rw = simulate_gbm_paths(model, market, grid, n, seed, Measure::real_world);
    const auto rn = simulate_gbm_paths(model, market, grid, n, seed + 50, Measure::risk_neutral);
    const std::size_t last = grid.size() - 1;
    std::vector<double> z(n), disc(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Recover the real-world Brownian value from the exact log-normal step.
      const double w = (std::log(rw(i, last) / model.s0()) - (mu - 0.5 * sigma * sigma) * horizon) / sigma;
      z[i] = rn_density(model, market, w, horizon);
      disc[i] = std::exp(-r * horizon) * rn(i, last) / model.s0();
    }
    for (const auto& est : {mean_and_stderr(z), mean_and_stderr(disc)}) {
      const double score = std::abs(est.mean - 1.0) / est.std_error;
      worst = std::max(worst, score);
      pass = pass && score <= kStdErrors;
    }
  }
  std::ostringstream os;
  os.precision(3);
  os << "max |mean - 1| / se = " << worst << " over 5 sets x 2 martingales (limit 3)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 7

// Flat-curve par spread from the closed-form legs, and its inverse by bisection.
double oracle_spread(double lambda, double r, double recovery) {
  const auto legs = oracle::flat_cds_legs(lambda, r, 5.0, recovery);
  return legs.protection / legs.annuity;
}

double oracle_flat_intensity(double spread, double r, double recovery) {
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle_spread(mid, r, recovery) < spread ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome calibration_recovery() {
  const double r = 0.03, recovery = 0.4;
  const MarketConfig market(r);
  const char* regions[] = {"emea", "amer", "apac"};
  const char* sectors[] = {"banks", "energy"};
  const char* ratings[] = {"A", "BBB"};
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<FirmAttributes> universe;
  for (int i = 0; i < 20; ++i)
    universe.push_back({"F" + std::to_string(i), regions[i % 3], sectors[(i / 3) % 2], ratings[(i / 6) % 2]});
  const FirmAttributes target{"TGT", "emea", "banks", "A"};
  universe.push_back(target);

  double worst_coef = 0.0, worst_lambda = 0.0;
  for (int d = 0; d < 10; ++d) {
    const std::string date = "2024-" + std::string(d < 9 ? "0" : "") + std::to_string(d + 1) + "-15";
    const double g0 = -1.5 + u(rng);
    const double g1 = 0.6 + 0.6 * u(rng);
    std::vector<EdfRecord> edf;
    std::vector<CdsPanelQuote> cds;
    std::vector<std::pair<FirmAttributes, double>> liquid;
    for (int i = 0; i < 20; ++i) {
      const double lambda = std::exp(std::log(0.001) + u(rng) * std::log(100.0));  // 0.001 .. 0.1
      const double spread = oracle_spread(lambda, r, recovery);
      cds.push_back({universe[i].firm_id, date, {5.0, spread, recovery}});
      edf.push_back({universe[i].firm_id, date, -std::expm1(-std::exp(g0 + g1 * std::log(lambda)))});
      liquid.emplace_back(universe[i], spread);
    }
    const auto result = calibrate_counterparty_curve(target, universe, edf, cds, date, market, {});
    worst_coef = std::max({worst_coef, std::abs(result.fit.gamma0 - g0), std::abs(result.fit.gamma1 - g1)});

    // Construction: geometric mean of full-bucket peers, flat-curve inversion, then the line.
    double log_sum = 0.0;
    int members = 0;
    for (const auto& [firm, spread] : liquid)
      if (firm.region == target.region && firm.sector == target.sector &&
          firm.rating_bucket == target.rating_bucket) {
        log_sum += std::log(spread);
        ++members;
      }
    const double proxy_spread = std::exp(log_sum / members);
    const double lambda_proxy = oracle_flat_intensity(proxy_spread, r, recovery);
    const double expected = std::exp(g0 + g1 * std::log(lambda_proxy));
    worst_lambda = std::max(worst_lambda, std::abs(result.lambda_real_world - expected));
  }
  return {worst_coef <= kRegressionTol && worst_lambda <= kRealWorldIntensityTol,
          "max coefficient err " + fmt(worst_coef) + " (tol 1e-10), max real-world intensity err " +
              fmt(worst_lambda) + " (tol 1e-08)"};
}

// ---------------------------------------------------------------- 8

Outcome cli_determinism() {
  using testing::run_cli;
  testing::TempDir dir("acceptance_det");
  const auto config = dir.write("run.cfg",
                                "market.r = 0.03\nmodel.s0 = 100\nmodel.mu = 0.07\nmodel.sigma = 0.25\n"
                                "grid.n_steps = 20\nsimulation.n_paths = 20000\nsimulation.seed = 88\n"
                                "hedge.bootstrap_samples = 20\n");
  const auto book = dir.write("book.csv", "kind,strike,maturity_years,notional\n"
                                          "european_call,100,2,1\nforward,95,1,1\neuropean_put,90,1.5,-1\n");
  std::string cds = "counterparty_id,date,tenor_years,spread_decimal,recovery\n";
  std::string edf = "firm_id,date,edf_1y\n";
  std::string attrs = "firm_id,region,sector,rating_bucket\nTGT,emea,banks,A\n";
  for (int i = 0; i < 6; ++i) {
    const std::string id = "F" + std::to_string(i);
    attrs += id + (i % 2 ? ",emea,banks,A\n" : ",amer,banks,A\n");
    for (const char* date : {"2024-01-31", "2024-02-29"}) {
      cds += id + "," + date + ",5," + testing::num(0.004 + 0.003 * i) + ",0.4\n";
      cds += id + "," + date + ",1," + testing::num(0.003 + 0.002 * i) + ",0.4\n";
      edf += id + "," + date + "," + testing::num(0.002 + 0.0015 * i + 0.0007 * (i % 3)) + "\n";
    }
  }
  const auto cds_file = dir.write("cds.csv", cds);
  const auto edf_file = dir.write("edf.csv", edf);
  const auto attrs_file = dir.write("attrs.csv", attrs);

  const std::vector<std::vector<std::string>> commands = {
      {"price-cva", "--portfolio", book, "--intensity", "0.03", "--check-mc"},
      {"price-cva", "--portfolio", book, "--cds-panel", cds_file, "--edf-panel", edf_file, "--attrs",
       attrs_file, "--target", "TGT"},
      {"hedge", "--portfolio", book, "--intensity", "0.1", "--pe-mode", "empirical"},
      {"calibrate", "--cds-panel", cds_file, "--edf-panel", edf_file, "--attrs", attrs_file, "--target", "TGT"},
      {"bootstrap", "--quotes", cds_file, "--counterparty", "F3", "--date", "2024-02-29"}};
  bool pass = true;
  std::string failed;
  int run_id = 0;
  for (const auto& base : commands) {
    std::vector<std::string> reports;
    for (const char* threads : {"1", "4", "1"}) {
      auto args = base;
      const auto out = dir.file("r" + std::to_string(run_id++) + ".txt");
      args.insert(args.end(), {"--config", config, "--threads", threads, "--out", out, "--deterministic"});
      const auto res = run_cli(args);
      if (res.code != 0) {
        pass = false;
        failed += " " + base[0] + "(exit " + std::to_string(res.code) + ": " + res.err + ")";
      }
      reports.push_back(testing::read_file(out));
    }
    if (reports[0].empty() || reports[0] != reports[1] || reports[0] != reports[2]) {
      pass = false;
      failed += " " + base[0] + "(reports differ)";
    }
  }
  return {pass, pass ? "5 commands x (serial, 4 threads, serial) byte-identical" : "failed:" + failed};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hedge equals default probabilities", 1.0, hedge_equals_probabilities},
      {2, "empirical hedge convergence", 60.0, empirical_hedge_convergence},
      {3, "CVA route consistency", 60.0, route_consistency},
      {4, "closed-form CVA", 1.0, closed_form_cva},
      {5, "CDS bootstrap round trip", 10.0, bootstrap_round_trip},
      {6, "martingale suite", 10.0, martingale_suite},
      {7, "calibration recovery", 5.0, calibration_recovery},
      {8, "CLI determinism", 60.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit_s;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %d %s: %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds, c.time_limit_s, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
