#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace cva {

/// Neumaier compensated accumulator. Result depends only on the order of add().
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Sample mean and standard error (sample std with divisor n-1, over sqrt(n)).
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanEstimate mean_and_stderr(std::span<const double> xs) noexcept {
  MeanEstimate out;
  const auto n = xs.size();
  if (n == 0) return out;
  out.mean = compensated_sum(xs) / static_cast<double>(n);
  if (n < 2) return out;
  CompensatedSum ss;
  for (double x : xs) ss.add((x - out.mean) * (x - out.mean));
  const double var = ss.value() / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

}  // namespace cva
