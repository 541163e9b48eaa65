#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cva/cva_engine.hpp"
#include "cva/pd_calibration.hpp"

namespace cva::cli {

/// Flat `key = value` file with `#` comments and dotted section prefixes.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text, const std::string& source);
  static KeyValueFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> entries_;
};

struct RunConfig {
  double r = 0.0;
  std::optional<double> s0;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<double> horizon;
  std::size_t n_steps = 50;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double recovery = 0.4;
  CvaMode mode = CvaMode::real_world_intensity;
  double haircut = 0.0;
  double calibration_recovery = 0.4;
  AttributeVocabulary vocabulary;
  std::vector<BucketLevel> fallback_order = default_fallback_order();
  std::size_t bootstrap_samples = 100;

  static RunConfig from_file(const KeyValueFile& file);

  /// Throws ConfigError when any of model.s0, model.mu, model.sigma is missing.
  GbmModel model() const;
  MarketConfig market() const { return MarketConfig(r); }
  CvaConfig cva() const { return CvaConfig(recovery, mode); }

  /// Effective configuration as ordered key/value text, excluding run-time
  /// knobs that must not change results (thread count).
  std::vector<std::pair<std::string, std::string>> echo() const;
};

}  // namespace cva::cli
