#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cva/credit_curves.hpp"
#include "cva/exposure_engine.hpp"
#include "cva/market_model.hpp"

namespace cva {

/// Sample covariance of exposures across grid times, row-major n x n.
struct CovMatrix {
  TimeGrid grid;
  std::vector<double> entries;

  std::size_t dim() const noexcept { return grid.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
};

/// p_i = P(tau = t_i) on a discrete default grid; 1 - sum(p) survives past T.
class DefaultDistribution {
 public:
  DefaultDistribution(TimeGrid grid, std::vector<double> probs);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  TimeGrid grid_;
  std::vector<double> probs_;
};

struct HedgePortfolio {
  TimeGrid grid;
  std::vector<double> positions;
  double cost = 0.0;
  bool regularized = false;
};

/// Index of the first grid time >= tau, or nullopt when tau is past the horizon.
std::optional<std::size_t> discretize_default_time(const DefaultTime& tau, const TimeGrid& grid);

/// p_i = S(t_{i-1}) - S(t_i) with t_0 = 0 (mass at the right endpoint).
DefaultDistribution discretize_default_distribution(const DefaultCurve& curve,
                                                    const TimeGrid& grid);

CovMatrix covariance_matrix(const PathMatrix& exposure_paths);

/// Sigma_V * P, using independence of default and market risk.
std::vector<double> pe_covariance_analytic(const CovMatrix& cov, const DefaultDistribution& dist);

/// Sample Cov(PE_tau, V_{t_i}^+) with PE_tau = V^+ at the discretized default time.
std::vector<double> pe_covariance_empirical(const PathMatrix& exposure_paths,
                                            std::span<const DefaultTime> default_samples,
                                            const TimeGrid& grid);

/// Solves Sigma h = pe_cov by Cholesky. Falls back once to Sigma + eps I with
/// eps = 1e-10 * max diagonal when the condition number exceeds 1e12.
HedgePortfolio solve_min_variance_hedge(const CovMatrix& cov, std::span<const double> pe_cov);

double hedge_cost(const HedgePortfolio& hedge, const ExposureProfile& profile);

/// Bootstrap (resampling paths with replacement, default time attached to its
/// path) standard errors of the empirical hedge and the empirical PE covariance.
struct HedgeBootstrap {
  std::vector<double> hedge_std_error;
  std::vector<double> pe_cov_std_error;
};

HedgeBootstrap bootstrap_hedge_errors(const PathMatrix& exposure_paths,
                                      std::span<const DefaultTime> default_samples,
                                      std::size_t n_resamples, std::uint64_t seed,
                                      std::size_t n_threads = 1);

inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kTikhonovScale = 1e-10;

}  // namespace cva
