#pragma once

#include <array>

namespace cva {

/// Five-point Gauss-Legendre rule on [a, b]. Exact for polynomials of degree <= 9.
template <typename F>
double gauss_legendre5(F&& f, double a, double b) {
  static constexpr std::array<double, 5> nodes = {
      0.0, -0.5384693101056830910363144, 0.5384693101056830910363144,
      -0.9061798459386639927976269, 0.9061798459386639927976269};
  static constexpr std::array<double, 5> weights = {
      0.5688888888888888888888889, 0.4786286704993664680412915, 0.4786286704993664680412915,
      0.2369268850561890875142640, 0.2369268850561890875142640};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return half * sum;
}

}  // namespace cva
