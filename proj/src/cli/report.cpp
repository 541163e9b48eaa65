#include "cva/cli/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cva::cli {

std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string format_numbers(std::span<const double> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(xs[i]);
  }
  return out;
}

void Report::set(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void Report::set(std::string key, double value) { set(std::move(key), format_number(value)); }

void Report::set(std::string key, std::span<const double> values) {
  set(std::move(key), format_numbers(values));
}

void Report::set_count(std::string key, std::size_t value) {
  set(std::move(key), std::to_string(value));
}

void Report::set_flag(std::string key, bool value) {
  set(std::move(key), std::string(value ? "true" : "false"));
}

void Report::write_machine(std::ostream& os) const {
  for (const auto& [key, value] : entries_) os << key << '=' << value << '\n';
}

void Report::write_table(std::ostream& os) const {
  std::size_t width = 0;
  for (const auto& entry : entries_) width = std::max(width, entry.first.size());
  for (const auto& [key, value] : entries_)
    os << std::left << std::setw(static_cast<int>(width) + 2) << key << value << '\n';
}

}  // namespace cva::cli
