#include "cva/hedge_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cva/errors.hpp"
#include "cva/numerics.hpp"
#include "cva/parallel.hpp"
#include "cva/random.hpp"

namespace cva {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd sample_covariance(const Eigen::Ref<const RowMatrix>& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RowMatrix centered = x.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
  return 0.5 * (cov + cov.transpose());
}

Eigen::VectorXd sample_cross_covariance(const Eigen::Ref<const RowMatrix>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::VectorXd y_centered = y.array() - y.mean();
  return ((x.rowwise() - mean).transpose() * y_centered) / static_cast<double>(x.rows() - 1);
}

Eigen::VectorXd pe_at_default(const Eigen::Ref<const RowMatrix>& x,
                              std::span<const std::optional<std::size_t>> default_index) {
  Eigen::VectorXd pe = Eigen::VectorXd::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (const auto k = default_index[static_cast<std::size_t>(i)])
      pe[i] = x(i, static_cast<Eigen::Index>(*k));
  return pe;
}

Eigen::Map<const RowMatrix> as_matrix(const PathMatrix& paths) {
  return {paths.values().data(), static_cast<Eigen::Index>(paths.n_paths()),
          static_cast<Eigen::Index>(paths.n_times())};
}

std::vector<std::optional<std::size_t>> discretize_all(std::span<const DefaultTime> samples,
                                                       const TimeGrid& grid) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(samples.size());
  for (const auto& tau : samples) out.push_back(discretize_default_time(tau, grid));
  return out;
}

struct Solution {
  Eigen::VectorXd h;
  bool regularized;
};

Solution solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const double max_diag = a.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw SingularityError("covariance matrix is zero");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();

  if (condition <= kMaxConditionNumber) {
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return {llt.solve(b), false};
  }
  const Eigen::MatrixXd shifted =
      a + kTikhonovScale * max_diag * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw SingularityError("covariance matrix not positive definite after regularization");
  Eigen::VectorXd h = llt.solve(b);
  if (!h.allFinite()) throw SingularityError("non-finite hedge after regularization");
  return {std::move(h), true};
}

}  // namespace

DefaultDistribution::DefaultDistribution(TimeGrid grid, std::vector<double> probs)
    : grid_(std::move(grid)), probs_(std::move(probs)) {
  if (probs_.size() != grid_.size())
    throw InputError("DefaultDistribution: one probability per grid point required");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("DefaultDistribution: p outside [0, 1]");
    total += p;
  }
  if (total > 1.0 + 1e-12) throw InputError("DefaultDistribution: probabilities sum above 1");
}

std::optional<std::size_t> discretize_default_time(const DefaultTime& tau, const TimeGrid& grid) {
  if (!tau.occurs_by(grid.horizon())) return std::nullopt;
  const auto times = grid.times();
  const auto it = std::lower_bound(times.begin(), times.end(), tau.time());
  return static_cast<std::size_t>(it - times.begin());
}

DefaultDistribution discretize_default_distribution(const DefaultCurve& curve,
                                                    const TimeGrid& grid) {
  std::vector<double> probs(grid.size());
  double prev = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = survival(curve, grid[i]);
    probs[i] = std::max(prev - s, 0.0);
    prev = s;
  }
  return DefaultDistribution(grid, std::move(probs));
}

CovMatrix covariance_matrix(const PathMatrix& exposure_paths) {
  if (exposure_paths.n_paths() < 2) throw InputError("covariance_matrix: need >= 2 paths");
  const Eigen::MatrixXd cov = sample_covariance(as_matrix(exposure_paths));
  CovMatrix out{exposure_paths.grid(), std::vector<double>(cov.size())};
  Eigen::Map<RowMatrix>(out.entries.data(), cov.rows(), cov.cols()) = cov;
  return out;
}

std::vector<double> pe_covariance_analytic(const CovMatrix& cov, const DefaultDistribution& dist) {
  if (!(cov.grid == dist.grid())) throw ContractError("pe_covariance_analytic: grid mismatch");
  const std::size_t n = cov.dim();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < n; ++j) acc.add(cov(i, j) * dist.probs()[j]);
    out[i] = acc.value();
  }
  return out;
}

std::vector<double> pe_covariance_empirical(const PathMatrix& exposure_paths,
                                            std::span<const DefaultTime> default_samples,
                                            const TimeGrid& grid) {
  if (!(exposure_paths.grid() == grid))
    throw InputError("pe_covariance_empirical: grid does not match exposure paths");
  if (default_samples.size() != exposure_paths.n_paths())
    throw InputError("pe_covariance_empirical: need one default time per path");
  if (exposure_paths.n_paths() < 2) throw InputError("pe_covariance_empirical: need >= 2 paths");
  const auto x = as_matrix(exposure_paths);
  const auto index = discretize_all(default_samples, grid);
  const Eigen::VectorXd cross = sample_cross_covariance(x, pe_at_default(x, index));
  return {cross.data(), cross.data() + cross.size()};
}

HedgePortfolio solve_min_variance_hedge(const CovMatrix& cov, std::span<const double> pe_cov) {
  const std::size_t n = cov.dim();
  if (cov.entries.size() != n * n) throw InputError("solve_min_variance_hedge: matrix not square");
  if (pe_cov.size() != n) throw InputError("solve_min_variance_hedge: right-hand side length");
  const Eigen::Map<const RowMatrix> a(cov.entries.data(), static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> b(pe_cov.data(), static_cast<Eigen::Index>(n));
  const auto sol = solve_spd(a, b);
  return {cov.grid, std::vector<double>(sol.h.data(), sol.h.data() + n), 0.0, sol.regularized};
}

double hedge_cost(const HedgePortfolio& hedge, const ExposureProfile& profile) {
  if (!(hedge.grid == profile.grid)) throw ContractError("hedge_cost: grid mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < hedge.positions.size(); ++i)
    acc.add(hedge.positions[i] * profile.depe[i]);
  return acc.value();
}

HedgeBootstrap bootstrap_hedge_errors(const PathMatrix& exposure_paths,
                                      std::span<const DefaultTime> default_samples,
                                      std::size_t n_resamples, std::uint64_t seed,
                                      std::size_t n_threads) {
  if (n_resamples < 2) throw InputError("bootstrap_hedge_errors: need >= 2 resamples");
  if (default_samples.size() != exposure_paths.n_paths())
    throw InputError("bootstrap_hedge_errors: need one default time per path");
  const auto n = static_cast<Eigen::Index>(exposure_paths.n_paths());
  const auto dim = static_cast<Eigen::Index>(exposure_paths.n_times());
  const auto x = as_matrix(exposure_paths);
  const auto index = discretize_all(default_samples, exposure_paths.grid());

  std::vector<Eigen::VectorXd> hedges(n_resamples);
  std::vector<Eigen::VectorXd> pe_covs(n_resamples);
  parallel_for_chunks(n_resamples, n_threads, [&](std::size_t begin, std::size_t end) {
    RowMatrix xb(n, dim);
    std::vector<std::optional<std::size_t>> ib(static_cast<std::size_t>(n));
    for (std::size_t b = begin; b < end; ++b) {
      CounterStream stream(seed, b);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto pick = static_cast<Eigen::Index>(stream.next_u64() % static_cast<std::uint64_t>(n));
        xb.row(i) = x.row(pick);
        ib[static_cast<std::size_t>(i)] = index[static_cast<std::size_t>(pick)];
      }
      pe_covs[b] = sample_cross_covariance(xb, pe_at_default(xb, ib));
      hedges[b] = solve_spd(sample_covariance(xb), pe_covs[b]).h;
    }
  });

  auto spread = [&](const std::vector<Eigen::VectorXd>& reps) {
    std::vector<double> out(static_cast<std::size_t>(dim));
    std::vector<double> column(reps.size());
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (std::size_t b = 0; b < reps.size(); ++b) column[b] = reps[b][k];
      // Bootstrap standard error is the spread of the replicates, not of their mean.
      out[static_cast<std::size_t>(k)] =
          mean_and_stderr(column).std_error * std::sqrt(static_cast<double>(reps.size()));
    }
    return out;
  };
  return {spread(hedges), spread(pe_covs)};
}

}  // namespace cva
