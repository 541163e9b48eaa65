#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cva::cli {

/// Shortest text that round-trips a double (17 significant digits).
std::string format_number(double x);
std::string format_numbers(std::span<const double> xs);

/// Ordered key/value report. Machine form is one `key=value` per line.
class Report {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::span<const double> values);
  void set_count(std::string key, std::size_t value);
  void set_flag(std::string key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  void write_machine(std::ostream& os) const;
  void write_table(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace cva::cli
