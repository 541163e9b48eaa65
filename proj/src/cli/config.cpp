#include "cva/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cva/cli/report.hpp"
#include "cva/errors.hpp"

namespace cva::cli {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "market.r",          "model.s0",           "model.mu",
      "model.sigma",       "grid.horizon",       "grid.n_steps",
      "simulation.n_paths", "simulation.seed",   "simulation.threads",
      "cva.recovery",      "cva.mode",           "calibration.haircut",
      "calibration.recovery", "calibration.regions", "calibration.sectors",
      "calibration.ratings", "calibration.fallback_order", "hedge.bootstrap_samples"};
  return keys;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(std::move(t));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(key + ": invalid number '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(key + ": invalid non-negative integer '" + text + "'");
  return v;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& source) {
  KeyValueFile file;
  file.source_ = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (!known_keys().contains(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (file.entries_.contains(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    file.entries_.emplace(std::move(key), std::move(value));
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

RunConfig RunConfig::from_file(const KeyValueFile& file) {
  RunConfig c;
  auto number = [&](const std::string& key) -> std::optional<double> {
    if (auto v = file.get(key)) return to_double(key, *v);
    return std::nullopt;
  };
  auto count = [&](const std::string& key) -> std::optional<std::uint64_t> {
    if (auto v = file.get(key)) return to_unsigned(key, *v);
    return std::nullopt;
  };

  if (auto v = number("market.r"))
    c.r = *v;
  else
    throw ConfigError("missing required key 'market.r'");
  c.s0 = number("model.s0");
  c.mu = number("model.mu");
  c.sigma = number("model.sigma");
  c.horizon = number("grid.horizon");
  if (auto v = count("grid.n_steps")) c.n_steps = *v;
  if (auto v = count("simulation.n_paths")) c.n_paths = *v;
  if (auto v = count("simulation.seed")) c.seed = *v;
  if (auto v = count("simulation.threads")) c.threads = *v;
  if (auto v = number("cva.recovery")) c.recovery = *v;
  if (auto v = file.get("cva.mode")) c.mode = parse_cva_mode(*v);
  if (auto v = number("calibration.haircut")) c.haircut = *v;
  if (auto v = number("calibration.recovery")) c.calibration_recovery = *v;
  if (auto v = file.get("calibration.regions")) c.vocabulary.regions = split_list(*v);
  if (auto v = file.get("calibration.sectors")) c.vocabulary.sectors = split_list(*v);
  if (auto v = file.get("calibration.ratings")) c.vocabulary.ratings = split_list(*v);
  if (auto v = file.get("calibration.fallback_order")) {
    c.fallback_order.clear();
    for (const auto& token : split_list(*v)) c.fallback_order.push_back(parse_bucket_level(token));
    if (c.fallback_order.empty()) throw ConfigError("calibration.fallback_order is empty");
  }
  if (auto v = count("hedge.bootstrap_samples")) c.bootstrap_samples = *v;

  if (c.n_steps < 1) throw ConfigError("grid.n_steps must be >= 1");
  if (c.n_paths < 1) throw ConfigError("simulation.n_paths must be >= 1");
  if (c.bootstrap_samples < 2) throw ConfigError("hedge.bootstrap_samples must be >= 2");
  if (!(c.haircut >= 0.0 && c.haircut < 1.0)) throw ConfigError("calibration.haircut must be in [0, 1)");
  if (!(c.calibration_recovery >= 0.0 && c.calibration_recovery < 1.0))
    throw ConfigError("calibration.recovery must be in [0, 1)");
  (void)c.cva();
  (void)c.market();
  if (c.s0 && c.mu && c.sigma) (void)c.model();
  return c;
}

GbmModel RunConfig::model() const {
  if (!s0 || !mu || !sigma)
    throw ConfigError("model.s0, model.mu and model.sigma are required for this command");
  try {
    return GbmModel(*s0, *mu, *sigma);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) out.emplace_back(key, format_number(*v));
  };
  out.emplace_back("market.r", format_number(r));
  opt("model.s0", s0);
  opt("model.mu", mu);
  opt("model.sigma", sigma);
  opt("grid.horizon", horizon);
  out.emplace_back("grid.n_steps", std::to_string(n_steps));
  out.emplace_back("simulation.n_paths", std::to_string(n_paths));
  out.emplace_back("simulation.seed", std::to_string(seed));
  out.emplace_back("cva.recovery", format_number(recovery));
  out.emplace_back("cva.mode", std::string(to_string(mode)));
  out.emplace_back("calibration.haircut", format_number(haircut));
  out.emplace_back("calibration.recovery", format_number(calibration_recovery));
  out.emplace_back("calibration.regions", join(vocabulary.regions));
  out.emplace_back("calibration.sectors", join(vocabulary.sectors));
  out.emplace_back("calibration.ratings", join(vocabulary.ratings));
  std::vector<std::string> order;
  for (auto level : fallback_order) order.emplace_back(to_string(level));
  out.emplace_back("calibration.fallback_order", join(order));
  out.emplace_back("hedge.bootstrap_samples", std::to_string(bootstrap_samples));
  return out;
}

}  // namespace cva::cli
