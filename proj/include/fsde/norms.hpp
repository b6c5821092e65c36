#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsde/stochastic.hpp"

namespace fsde {

class PathEnsemble;

/// Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
};

/// Mean-square norm per grid node: sqrt(mean_j |X_j(t_k)|^2) and its
/// delta-method standard error.
struct MsSeries {
  std::vector<double> estimate;
  std::vector<double> stderr;
  std::size_t n_paths = 0;
};

/// Per-node (count, mean, M2) of q = |x|^2 over paths. Merging is Chan's
/// pairwise update, so a fixed merge order gives bit-stable results.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t n_nodes = 0);

  void add(std::span<const double> q);
  void merge(const MomentAccumulator& other);
  MsSeries ms_series() const;
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Contraction constant of the Picard operator in the gamma-weighted norm,
///   kappa = sqrt(2 Gamma(2 alpha - 1) L^2 (T + 1) / (Gamma(alpha)^2 gamma)).
double kappa(double lipschitz, double horizon, double alpha, double gamma_coef);

/// Smallest admissible weight coefficient, 3 L^2 (T + 1) Gamma(2 alpha - 1) / Gamma(alpha)^2.
/// Any gamma above it gives kappa < sqrt(2/3).
double gamma_threshold(double lipschitz, double horizon, double alpha);

/// Horizon, weight coefficient, grid and order of the Bielecki-type norm
///   |X|_gamma = sup_t sqrt(E|X(t)|^2 / E_{2 alpha - 1}(gamma t^(2 alpha - 1))).
struct WeightedNormConfig {
  double horizon = 1.0;
  double gamma_coef = 1.0;
  TimeGrid grid;
  double alpha = 0.75;
};

/// Validates gamma > 0 and alpha in (1/2, 1); the horizon is the grid's.
WeightedNormConfig make_weighted_norm_config(const TimeGrid& grid, double gamma_coef, double alpha);

/// log E_{2 alpha - 1}(gamma t_k^(2 alpha - 1)) at every node. The weight
/// itself leaves the double range for moderate gamma and T.
std::vector<double> log_norm_weights(const WeightedNormConfig& config);

/// Sup over nodes of ms / sqrt(weight); the error is the standard error at
/// the maximizing node.
struct WeightedNormEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::size_t argmax = 0;
};

Estimate ms_norm(const PathEnsemble& ensemble, std::size_t node);
MsSeries ms_series(const PathEnsemble& ensemble);

double weighted_norm(const PathEnsemble& ensemble, const WeightedNormConfig& config);
WeightedNormEstimate weighted_norm_estimate(const MsSeries& series, const std::vector<double>& log_weights);
/// |a - b|_gamma for two ensembles on the same grid.
WeightedNormEstimate weighted_distance(const PathEnsemble& a, const PathEnsemble& b,
                                       const WeightedNormConfig& config);
WeightedNormEstimate weighted_distance(const PathEnsemble& a, const PathEnsemble& b,
                                       const std::vector<double>& log_weights);

}  // namespace fsde
