#include "cva/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "cva/cli/config.hpp"
#include "cva/cli/inputs.hpp"
#include "cva/cli/report.hpp"
#include "cva/cva_engine.hpp"
#include "cva/errors.hpp"
#include "cva/hedge_solver.hpp"
#include "cva/random.hpp"

namespace cva::cli {
namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> threads;
  bool deterministic = false;
};

void add_common(CLI::App& cmd, CommonOptions& common) {
  cmd.add_option("--config", common.config, "Run configuration file")->required();
  cmd.add_option("--out", common.out, "Write the machine-readable report here");
  cmd.add_option("--seed", common.seed, "Override simulation.seed");
  cmd.add_option("--paths", common.paths, "Override simulation.n_paths");
  cmd.add_option("--threads", common.threads, "Override simulation.threads (0 = all cores)");
  cmd.add_flag("--deterministic", common.deterministic, "Suppress the timestamp field");
}

RunConfig load_config(const CommonOptions& common) {
  auto config = RunConfig::from_file(KeyValueFile::load(common.config));
  if (common.seed) config.seed = *common.seed;
  if (common.paths) {
    if (*common.paths < 1) throw ConfigError("--paths must be >= 1");
    config.n_paths = *common.paths;
  }
  if (common.threads) config.threads = *common.threads;
  return config;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void echo_config(Report& report, const RunConfig& config) {
  for (const auto& [key, value] : config.echo()) report.set("config." + key, value);
}

int emit(Report& report, const CommonOptions& common, std::ostream& out, int code) {
  if (!common.deterministic) report.set("timestamp", utc_timestamp());
  report.write_table(out);
  if (!common.out.empty()) {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw InputError("cannot write report: " + common.out);
    report.write_machine(file);
  }
  return code;
}

TimeGrid exposure_grid(const RunConfig& config, const Portfolio& portfolio) {
  if (config.horizon && std::abs(*config.horizon - portfolio.horizon()) > 1e-12)
    throw ConfigError("grid.horizon must equal the portfolio horizon (latest maturity)");
  return TimeGrid::uniform(portfolio.horizon(), config.n_steps);
}

std::vector<CdsQuote> select_quotes(const std::vector<CdsPanelQuote>& panel,
                                    const std::optional<std::string>& counterparty,
                                    const std::optional<std::string>& date) {
  std::set<std::pair<std::string, std::string>> keys;
  std::vector<CdsPanelQuote> picked;
  for (const auto& q : panel) {
    if (counterparty && q.counterparty_id != *counterparty) continue;
    if (date && q.date != *date) continue;
    keys.emplace(q.counterparty_id, q.date);
    picked.push_back(q);
  }
  if (picked.empty()) throw InputError("no CDS quotes match the selection");
  if (keys.size() > 1)
    throw InputError("quotes span several counterparties or dates; use --counterparty and --date");
  std::vector<CdsQuote> quotes;
  for (const auto& q : picked) quotes.push_back(q.quote);
  std::sort(quotes.begin(), quotes.end(),
            [](const CdsQuote& a, const CdsQuote& b) { return a.tenor < b.tenor; });
  return quotes;
}

struct CalibrationInputs {
  std::string cds_panel;
  std::string edf_panel;
  std::string attrs;
  std::string target;
  std::optional<std::string> date;
};

struct LoadedCalibration {
  FirmAttributes target;
  std::vector<FirmAttributes> universe;
  std::vector<EdfRecord> edf;
  std::vector<CdsPanelQuote> cds;
  std::vector<std::string> dates;
};

LoadedCalibration load_calibration(const CalibrationInputs& in, const RunConfig& config) {
  LoadedCalibration out;
  out.cds = load_cds_quotes(in.cds_panel);
  out.edf = load_edf_panel(in.edf_panel);
  out.universe = load_firm_attributes(in.attrs);
  for (const auto& firm : out.universe) config.vocabulary.validate(firm);
  const auto it = std::find_if(out.universe.begin(), out.universe.end(),
                               [&](const auto& f) { return f.firm_id == in.target; });
  if (it == out.universe.end())
    throw InputError("target '" + in.target + "' not found in " + in.attrs);
  out.target = *it;

  std::set<std::string> cds_dates;
  std::set<std::string> edf_dates;
  for (const auto& q : out.cds) cds_dates.insert(q.date);
  for (const auto& e : out.edf) edf_dates.insert(e.date);
  std::set_intersection(cds_dates.begin(), cds_dates.end(), edf_dates.begin(), edf_dates.end(),
                        std::back_inserter(out.dates));
  if (in.date) {
    if (std::find(out.dates.begin(), out.dates.end(), *in.date) == out.dates.end())
      throw InputError("date " + *in.date + " is not present in both panels");
    out.dates = {*in.date};
  }
  if (out.dates.empty()) throw InputError("CDS and EDF panels share no date");
  return out;
}

CalibrationSettings settings_from(const RunConfig& config) {
  CalibrationSettings s;
  s.haircut = config.haircut;
  s.recovery = config.calibration_recovery;
  s.fallback_order = config.fallback_order;
  return s;
}

void report_curve(Report& report, const DefaultCurve& curve) {
  report.set("curve.measure", std::string(to_string(curve.measure())));
  report.set("curve.knots", curve.knots());
  report.set("curve.intensities", curve.intensities());
}

// ---------------------------------------------------------------- price-cva

struct PriceCvaOptions {
  std::string portfolio;
  std::optional<double> intensity;
  std::optional<std::string> curve_measure;
  std::optional<std::string> cds;
  std::optional<std::string> counterparty;
  std::optional<std::string> date;
  CalibrationInputs calibration;
  bool check_mc = false;
};

int price_cva(const CommonOptions& common, const PriceCvaOptions& opt, std::ostream& out) {
  const auto config = load_config(common);
  const auto market = config.market();
  const auto model = config.model();
  const auto cva_config = config.cva();
  const auto portfolio = load_portfolio(opt.portfolio);
  const auto grid = exposure_grid(config, portfolio);

  Report report;
  report.set("command", "price-cva");

  const int sources = (opt.intensity ? 1 : 0) + (opt.cds ? 1 : 0) +
                      (!opt.calibration.cds_panel.empty() ? 1 : 0);
  if (sources != 1)
    throw InputError("give exactly one curve source: --intensity, --cds or --cds-panel");

  std::optional<DefaultCurve> curve;
  if (opt.intensity) {
    const auto measure = opt.curve_measure ? parse_measure(*opt.curve_measure)
                                           : curve_measure_for(cva_config.mode());
    curve = DefaultCurve::flat(*opt.intensity, measure);
    report.set("curve.source", "intensity");
  } else if (opt.cds) {
    const auto quotes = select_quotes(load_cds_quotes(*opt.cds), opt.counterparty, opt.date);
    curve = bootstrap_intensities(quotes, market);
    report.set("curve.source", "cds");
  } else {
    const auto loaded = load_calibration(opt.calibration, config);
    const auto& date = opt.calibration.date ? *opt.calibration.date : loaded.dates.back();
    const auto result = calibrate_counterparty_curve(loaded.target, loaded.universe, loaded.edf,
                                                     loaded.cds, date, market,
                                                     settings_from(config));
    curve = result.curve;
    report.set("curve.source", "calibration");
    report.set("curve.calibration_date", date);
  }
  report_curve(report, *curve);

  const auto asset = simulate_gbm_paths(model, market, grid, config.n_paths, config.seed,
                                        Measure::risk_neutral, config.threads);
  const auto exposure = positive_exposure_paths(portfolio, asset, market, model, config.threads);
  const auto profile = epe_profile(exposure, market);
  const auto integral = cva_integral(profile, *curve, cva_config);

  report.set("value", integral.value);
  report.set("stderr", integral.std_error);
  report.set("mode", std::string(to_string(integral.mode)));
  report.set("route", std::string(to_string(integral.route)));
  report.set("seed", std::to_string(config.seed));
  report.set_count("n_paths", config.n_paths);
  report.set("grid", grid.times());
  report.set("depe", profile.depe);
  report.set("depe_std_error", profile.std_error);

  if (opt.check_mc) {
    const auto defaults = sample_default_times(
        *curve, config.n_paths, derive_seed(config.seed, kDefaultTimeFamily));
    const auto mc = cva_joint_mc(exposure, defaults, market, cva_config, config.threads);
    const double diff = std::abs(mc.value - integral.value);
    report.set("mc.value", mc.value);
    report.set("mc.stderr", mc.std_error);
    report.set("mc.route", std::string(to_string(mc.route)));
    report.set("mc.abs_diff", diff);
    report.set_flag("mc.within_3se", diff <= 3.0 * mc.std_error);
  }
  echo_config(report, config);
  return emit(report, common, out, kExitOk);
}

// ---------------------------------------------------------------- hedge

struct HedgeOptions {
  std::string portfolio;
  double intensity = 0.0;
  std::string pe_mode = "analytic";
  std::string measure = "real-world";
};

int hedge(const CommonOptions& common, const HedgeOptions& opt, std::ostream& out) {
  const auto config = load_config(common);
  const auto market = config.market();
  const auto model = config.model();
  const auto portfolio = load_portfolio(opt.portfolio);
  const auto grid = exposure_grid(config, portfolio);
  const auto measure = parse_measure(opt.measure);
  if (opt.pe_mode != "analytic" && opt.pe_mode != "empirical")
    throw InputError("--pe-mode must be analytic or empirical");
  const bool empirical = opt.pe_mode == "empirical";

  const auto curve = DefaultCurve::flat(opt.intensity, Measure::real_world);
  const auto dist = discretize_default_distribution(curve, grid);

  const auto asset =
      simulate_gbm_paths(model, market, grid, config.n_paths, config.seed, measure, config.threads);
  const auto exposure = exposure_scenarios(portfolio, asset, market, model, config.threads);
  const auto cov = covariance_matrix(exposure);

  std::vector<DefaultTime> defaults;
  std::vector<double> pe_cov;
  if (empirical) {
    defaults = sample_default_times(curve, config.n_paths,
                                    derive_seed(config.seed, kDefaultTimeFamily));
    pe_cov = pe_covariance_empirical(exposure, defaults, grid);
  } else {
    pe_cov = pe_covariance_analytic(cov, dist);
  }

  auto h = [&] {
    try {
      return solve_min_variance_hedge(cov, pe_cov);
    } catch (const SingularityError& e) {
      std::vector<double> diagonal(cov.dim());
      for (std::size_t i = 0; i < cov.dim(); ++i) diagonal[i] = cov(i, i);
      throw SingularityError(std::string(e.what()) + "; grid=" + format_numbers(grid.times()) +
                             "; covariance_diagonal=" + format_numbers(diagonal));
    }
  }();

  // Hedge contracts pay V^+ and are priced under Q*.
  const auto pricing_exposure =
      measure == Measure::risk_neutral
          ? exposure
          : positive_exposure_paths(portfolio,
                                    simulate_gbm_paths(model, market, grid, config.n_paths,
                                                       config.seed, Measure::risk_neutral,
                                                       config.threads),
                                    market, model, config.threads);
  const auto profile = epe_profile(pricing_exposure, market);
  h.cost = hedge_cost(h, profile);

  std::vector<double> diff(grid.size());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    diff[i] = h.positions[i] - dist.probs()[i];
    max_diff = std::max(max_diff, std::abs(diff[i]));
  }

  Report report;
  report.set("command", "hedge");
  report.set("pe_mode", opt.pe_mode);
  report.set("measure", std::string(to_string(measure)));
  report.set("seed", std::to_string(config.seed));
  report.set_count("n_paths", config.n_paths);
  report.set("grid", grid.times());
  report.set("hedge", h.positions);
  report.set("probabilities", dist.probs());
  report.set("max_abs_diff", max_diff);
  report.set("hedge_cost", h.cost);
  report.set("cva_discrete", cva_discrete(profile, dist, config.cva()).value);
  report.set_flag("regularized", h.regularized);

  if (empirical) {
    const auto boot = bootstrap_hedge_errors(exposure, defaults, config.bootstrap_samples,
                                             derive_seed(config.seed, kBootstrapFamily),
                                             config.threads);
    std::vector<double> z(grid.size());
    bool all_within = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double se = boot.hedge_std_error[i];
      z[i] = se > 0.0 ? diff[i] / se : (diff[i] == 0.0 ? 0.0 : INFINITY);
      all_within = all_within && std::abs(diff[i]) <= 3.0 * se;
    }
    report.set("hedge_bootstrap_std_error", boot.hedge_std_error);
    report.set("hedge_z_score", z);
    report.set_flag("within_3se", all_within);
  }
  echo_config(report, config);
  return emit(report, common, out, kExitOk);
}

// ---------------------------------------------------------------- calibrate

int calibrate(const CommonOptions& common, const CalibrationInputs& opt, std::ostream& out,
              std::ostream& err) {
  const auto config = load_config(common);
  const auto market = config.market();
  const auto loaded = load_calibration(opt, config);
  const auto settings = settings_from(config);

  Report report;
  report.set("command", "calibrate");
  report.set("target", loaded.target.firm_id);
  std::string joined;
  for (const auto& d : loaded.dates) joined += (joined.empty() ? "" : ",") + d;
  report.set("dates", joined);

  std::size_t failures = 0;
  for (const auto& date : loaded.dates) {
    const std::string p = "date." + date + ".";
    try {
      const auto r = calibrate_counterparty_curve(loaded.target, loaded.universe, loaded.edf,
                                                  loaded.cds, date, market, settings);
      report.set(p + "gamma0", r.fit.gamma0);
      report.set(p + "gamma1", r.fit.gamma1);
      report.set_count(p + "n_points", r.fit.n_points);
      report.set(p + "r_squared", r.fit.r_squared);
      report.set(p + "residual_std", r.fit.residual_std);
      report.set(p + "proxy_bucket", std::string(to_string(r.proxy.bucket)));
      report.set_count(p + "proxy_members", r.proxy.n_members);
      report.set(p + "proxy_spread", r.proxy.spread);
      report.set(p + "lambda_cds_proxy", r.lambda_cds_proxy);
      report.set(p + "lambda_real_world", r.lambda_real_world);
      for (double t : {1.0, 3.0, 5.0})
        report.set(p + "pd_" + std::to_string(static_cast<int>(t)) + "y",
                   -std::expm1(-r.lambda_real_world * t));
    } catch (const CalibrationError& e) {
      ++failures;
      report.set(p + "error", e.what());
      err << "calibrate: " << date << ": " << e.what() << '\n';
    }
  }
  report.set_count("failed_dates", failures);
  echo_config(report, config);
  return emit(report, common, out, failures == 0 ? kExitOk : kExitPartial);
}

// ---------------------------------------------------------------- bootstrap

struct BootstrapOptions {
  std::string quotes;
  std::optional<std::string> counterparty;
  std::optional<std::string> date;
};

int bootstrap(const CommonOptions& common, const BootstrapOptions& opt, std::ostream& out) {
  const auto config = load_config(common);
  const auto market = config.market();
  const auto quotes = select_quotes(load_cds_quotes(opt.quotes), opt.counterparty, opt.date);
  const auto curve = bootstrap_intensities(quotes, market);

  std::vector<double> tenors;
  std::vector<double> spreads;
  std::vector<double> repriced;
  std::vector<double> errors;
  double max_error = 0.0;
  for (const auto& q : quotes) {
    tenors.push_back(q.tenor);
    spreads.push_back(q.spread);
    repriced.push_back(price_cds_par_spread(curve, market, q.tenor, q.recovery));
    errors.push_back(std::abs(repriced.back() - q.spread));
    max_error = std::max(max_error, errors.back());
  }

  Report report;
  report.set("command", "bootstrap");
  report.set("recovery", quotes.front().recovery);
  report_curve(report, curve);
  report.set("quoted_spreads", spreads);
  report.set("repriced_spreads", repriced);
  report.set("repricing_error", errors);
  report.set("max_repricing_error", max_error);
  echo_config(report, config);
  return emit(report, common, out, kExitOk);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterparty CVA engine"};
  app.require_subcommand(1);

  CommonOptions common;

  PriceCvaOptions price_opt;
  auto* price_cmd = app.add_subcommand("price-cva", "Price CVA for a portfolio");
  add_common(*price_cmd, common);
  price_cmd->add_option("--portfolio", price_opt.portfolio, "Portfolio CSV")->required();
  price_cmd->add_option("--intensity", price_opt.intensity, "Flat default intensity");
  price_cmd->add_option("--curve-measure", price_opt.curve_measure,
                        "Measure tag for --intensity (real-world|risk-neutral)");
  price_cmd->add_option("--cds", price_opt.cds, "CDS quotes CSV to bootstrap");
  price_cmd->add_option("--counterparty", price_opt.counterparty, "Counterparty in --cds");
  price_cmd->add_option("--date", price_opt.date, "Quote date in --cds");
  price_cmd->add_option("--cds-panel", price_opt.calibration.cds_panel, "CDS panel CSV");
  price_cmd->add_option("--edf-panel", price_opt.calibration.edf_panel, "EDF panel CSV");
  price_cmd->add_option("--attrs", price_opt.calibration.attrs, "Firm attributes CSV");
  price_cmd->add_option("--target", price_opt.calibration.target, "Target firm id");
  price_cmd->add_option("--calibration-date", price_opt.calibration.date, "Calibration date");
  price_cmd->add_flag("--check-mc", price_opt.check_mc, "Also run the joint Monte Carlo route");

  HedgeOptions hedge_opt;
  auto* hedge_cmd = app.add_subcommand("hedge", "Minimum-variance hedge in exposure contracts");
  add_common(*hedge_cmd, common);
  hedge_cmd->add_option("--portfolio", hedge_opt.portfolio, "Portfolio CSV")->required();
  hedge_cmd->add_option("--intensity", hedge_opt.intensity, "Real-world flat intensity")
      ->required();
  hedge_cmd->add_option("--pe-mode", hedge_opt.pe_mode, "analytic|empirical");
  hedge_cmd->add_option("--measure", hedge_opt.measure,
                        "Measure of the exposure scenarios (real-world|risk-neutral)");

  CalibrationInputs calib_opt;
  auto* calib_cmd = app.add_subcommand("calibrate", "Real-world intensity from EDF and CDS panels");
  add_common(*calib_cmd, common);
  calib_cmd->add_option("--cds-panel", calib_opt.cds_panel, "CDS panel CSV")->required();
  calib_cmd->add_option("--edf-panel", calib_opt.edf_panel, "EDF panel CSV")->required();
  calib_cmd->add_option("--attrs", calib_opt.attrs, "Firm attributes CSV")->required();
  calib_cmd->add_option("--target", calib_opt.target, "Target firm id")->required();
  calib_cmd->add_option("--date", calib_opt.date, "Restrict to one date");

  BootstrapOptions boot_opt;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap intensities from CDS quotes");
  add_common(*boot_cmd, common);
  boot_cmd->add_option("--quotes", boot_opt.quotes, "CDS quotes CSV")->required();
  boot_cmd->add_option("--counterparty", boot_opt.counterparty, "Counterparty filter");
  boot_cmd->add_option("--date", boot_opt.date, "Date filter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (price_cmd->parsed()) return price_cva(common, price_opt, out);
    if (hedge_cmd->parsed()) return hedge(common, hedge_opt, out);
    if (calib_cmd->parsed()) return calibrate(common, calib_opt, out, err);
    if (boot_cmd->parsed()) return bootstrap(common, boot_opt, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cva::cli
