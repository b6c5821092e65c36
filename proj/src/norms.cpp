#include <algorithm>
#include <cmath>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/norms.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"

namespace fsde {
namespace {

void check_order(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (1/2, 1), got " + std::to_string(alpha));
  }
}

void check_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string(what) + " must be non-negative");
}

void check_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(std::string(what) + " must be positive");
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

MsSeries distance_series(const PathEnsemble& a, const PathEnsemble& b) {
  if (!(a.grid() == b.grid()) || a.n_paths() != b.n_paths() || a.dim() != b.dim()) {
    throw GridMismatchError("ensembles differ in grid, path count or dimension");
  }
  const std::size_t n_nodes = a.grid().n_nodes();
  const std::size_t d = a.dim();
  MomentAccumulator acc(n_nodes);
  std::vector<double> q(n_nodes);
  for (std::size_t j = 0; j < a.n_paths(); ++j) {
    const auto pa = a.path(j);
    const auto pb = b.path(j);
    for (std::size_t k = 0; k < n_nodes; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = pa[k * d + c] - pb[k * d + c];
        s += diff * diff;
      }
      q[k] = s;
    }
    acc.add(q);
  }
  return acc.ms_series();
}

}  // namespace

MomentAccumulator::MomentAccumulator(std::size_t n_nodes) : mean_(n_nodes, 0.0), m2_(n_nodes, 0.0) {}

void MomentAccumulator::add(std::span<const double> q) {
  if (q.size() != mean_.size()) throw GridMismatchError("moment sample has the wrong length");
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double delta = q[k] - mean_[k];
    mean_[k] += delta * inv;
    m2_[k] += delta * (q[k] - mean_[k]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.mean_.size() != mean_.size()) throw GridMismatchError("moment accumulators differ in length");
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    const double delta = other.mean_[k] - mean_[k];
    mean_[k] += delta * nb / n;
    m2_[k] += other.m2_[k] + delta * delta * na * nb / n;
  }
  count_ += other.count_;
}

MsSeries MomentAccumulator::ms_series() const {
  if (count_ == 0) throw DomainError("mean-square estimate of an empty ensemble");
  MsSeries out;
  out.n_paths = count_;
  out.estimate.resize(mean_.size());
  out.stderr.resize(mean_.size());
  const double n = static_cast<double>(count_);
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    const double m = std::max(mean_[k], 0.0);
    const double root = std::sqrt(m);
    out.estimate[k] = root;
    if (count_ < 2 || root == 0.0) {
      out.stderr[k] = 0.0;
      continue;
    }
    const double var = std::max(m2_[k], 0.0) / (n - 1.0);
    out.stderr[k] = std::sqrt(var / n) / (2.0 * root);
  }
  return out;
}

double kappa(double lipschitz, double horizon, double alpha, double gamma_coef) {
  check_nonnegative(lipschitz, "Lipschitz constant");
  check_positive(horizon, "horizon");
  check_order(alpha);
  check_positive(gamma_coef, "gamma");
  const double ga = gamma_fn(alpha);
  return std::sqrt(2.0 * gamma_fn(2.0 * alpha - 1.0) * lipschitz * lipschitz * (horizon + 1.0) /
                   (ga * ga * gamma_coef));
}

double gamma_threshold(double lipschitz, double horizon, double alpha) {
  check_nonnegative(lipschitz, "Lipschitz constant");
  check_positive(horizon, "horizon");
  check_order(alpha);
  const double ga = gamma_fn(alpha);
  return 3.0 * lipschitz * lipschitz * (horizon + 1.0) * gamma_fn(2.0 * alpha - 1.0) / (ga * ga);
}

WeightedNormConfig make_weighted_norm_config(const TimeGrid& grid, double gamma_coef, double alpha) {
  check_positive(gamma_coef, "gamma");
  check_order(alpha);
  return WeightedNormConfig{grid.horizon(), gamma_coef, grid, alpha};
}

std::vector<double> log_norm_weights(const WeightedNormConfig& config) {
  check_positive(config.gamma_coef, "gamma");
  check_order(config.alpha);
  if (config.grid.horizon() != config.horizon) {
    throw GridMismatchError("weighted norm horizon differs from its grid horizon");
  }
  std::vector<double> w(config.grid.n_nodes());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = log_ml_weight(config.gamma_coef, config.alpha, config.grid.node(k));
  }
  return w;
}

Estimate ms_norm(const PathEnsemble& ensemble, std::size_t node) {
  if (node >= ensemble.grid().n_nodes()) throw DomainError("node index outside the grid");
  if (ensemble.n_paths() == 0) throw DomainError("mean-square estimate of an empty ensemble");
  MomentAccumulator acc(1);
  for (std::size_t j = 0; j < ensemble.n_paths(); ++j) {
    const double q = squared_norm(ensemble.state(j, node));
    acc.add(std::span<const double>(&q, 1));
  }
  const auto s = acc.ms_series();
  return {s.estimate[0], s.stderr[0]};
}

MsSeries ms_series(const PathEnsemble& ensemble) {
  const std::size_t n_nodes = ensemble.grid().n_nodes();
  MomentAccumulator acc(n_nodes);
  std::vector<double> q(n_nodes);
  for (std::size_t j = 0; j < ensemble.n_paths(); ++j) {
    for (std::size_t k = 0; k < n_nodes; ++k) q[k] = squared_norm(ensemble.state(j, k));
    acc.add(q);
  }
  return acc.ms_series();
}

WeightedNormEstimate weighted_norm_estimate(const MsSeries& series, const std::vector<double>& log_weights) {
  if (series.estimate.size() != log_weights.size()) {
    throw GridMismatchError("norm weights do not match the series length");
  }
  WeightedNormEstimate out;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    const double scale = std::exp(-0.5 * log_weights[k]);
    const double v = series.estimate[k] * scale;
    if (k == 0 || v > out.value) {
      out.value = v;
      out.stderr = series.stderr[k] * scale;
      out.argmax = k;
    }
  }
  return out;
}

double weighted_norm(const PathEnsemble& ensemble, const WeightedNormConfig& config) {
  if (!(ensemble.grid() == config.grid)) {
    throw GridMismatchError("ensemble grid differs from the weighted-norm grid");
  }
  return weighted_norm_estimate(ms_series(ensemble), log_norm_weights(config)).value;
}

WeightedNormEstimate weighted_distance(const PathEnsemble& a, const PathEnsemble& b,
                                       const WeightedNormConfig& config) {
  if (!(a.grid() == config.grid)) {
    throw GridMismatchError("ensemble grid differs from the weighted-norm grid");
  }
  return weighted_distance(a, b, log_norm_weights(config));
}

WeightedNormEstimate weighted_distance(const PathEnsemble& a, const PathEnsemble& b,
                                       const std::vector<double>& log_weights) {
  return weighted_norm_estimate(distance_series(a, b), log_weights);
}

}  // namespace fsde
