#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fsde/models.hpp"
#include "fsde/norms.hpp"
#include "fsde/stochastic.hpp"

namespace fsde {

/// Weight multiplying sigma(t_k, X_k) dW_k in the stochastic convolution.
enum class StochasticWeight {
  left_point,  ///< (t_n - t_k)^(alpha - 1)
  l2_exact,    ///< sqrt(int_{t_k}^{t_k+1} (t_n - s)^(2 alpha - 2) ds / h)
};

struct SchemeOptions {
  StochasticWeight stochastic_weight = StochasticWeight::left_point;
};

std::string to_string(StochasticWeight w);
StochasticWeight stochastic_weight_from_string(const std::string& name);

struct Provenance {
  std::string problem;
  std::string scheme;
  std::uint64_t seed = 0;
};

/// States X_j(t_k) in R^d, stored [path][node][component].
class PathEnsemble {
 public:
  PathEnsemble(TimeGrid grid, std::size_t n_paths, std::size_t dim, Provenance provenance = {});

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t dim() const noexcept { return dim_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  Provenance& provenance() noexcept { return provenance_; }

  std::span<double> path(std::size_t j);
  std::span<const double> path(std::size_t j) const;
  std::span<const double> state(std::size_t j, std::size_t node) const;
  std::span<const double> data() const noexcept { return states_; }

  bool operator==(const PathEnsemble& other) const;

 private:
  TimeGrid grid_;
  std::size_t n_paths_;
  std::size_t dim_;
  Provenance provenance_;
  std::vector<double> states_;
};

/// Product-integration weights on a uniform grid, indexed by lag m = n - k
/// in 1..n_steps, with 1 / Gamma(alpha) folded in:
///   drift(m) = h^alpha (m^alpha - (m - 1)^alpha) / (alpha Gamma(alpha))
///   noise(m) = (m h)^(alpha - 1) / Gamma(alpha)           (left point)
/// The drift weights are the exact kernel integrals over each subinterval,
/// so sum_{m=1}^{n} drift(m) Gamma(alpha) = t_n^alpha / alpha.
class KernelWeights {
 public:
  KernelWeights(const TimeGrid& grid, double alpha, SchemeOptions scheme = {});

  std::size_t n_steps() const noexcept { return n_steps_; }
  double drift(std::size_t lag) const { return drift_rev_[n_steps_ - lag]; }
  double noise(std::size_t lag) const { return noise_rev_[n_steps_ - lag]; }
  /// p with p[k] = drift(n - k) for k in [0, n).
  const double* drift_for_node(std::size_t n) const { return drift_rev_.data() + (n_steps_ - n); }
  const double* noise_for_node(std::size_t n) const { return noise_rev_.data() + (n_steps_ - n); }

 private:
  std::size_t n_steps_;
  std::vector<double> drift_rev_;
  std::vector<double> noise_rev_;
};

/// Single-path integrator shared by the ensemble kernels.
class PathIntegrator {
 public:
  static constexpr std::size_t kFinite = std::numeric_limits<std::size_t>::max();

  PathIntegrator(const FsdeProblem& problem, const TimeGrid& grid, SchemeOptions scheme = {});

  /// X_n = eta + sum_{k<n} drift(n-k) b(t_k, X_k) + noise(n-k) sigma(t_k, X_k) dW_k.
  /// `states` holds (n_steps + 1) * dim values. Returns the first node with
  /// a non-finite state, or kFinite.
  std::size_t solve(std::span<const double> eta, std::span<const double> increments,
                    std::span<double> states) const;

  /// Same sums with the coefficients evaluated along `input` instead of the
  /// evolving state: one application of the Picard operator.
  std::size_t apply(std::span<const double> eta, std::span<const double> increments,
                    std::span<const double> input, std::span<double> states) const;

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return problem_->dim; }

 private:
  std::size_t run(std::span<const double> eta, std::span<const double> increments,
                  const double* input, std::span<double> states) const;

  const FsdeProblem* problem_;
  TimeGrid grid_;
  KernelWeights weights_;
};

/// Product-integration Euler-Maruyama over all paths (OpenMP over paths).
/// Results do not depend on the thread count. Throws BlowUpError with the
/// lowest offending path, DomainError on dimension mismatch.
PathEnsemble solve_em(const FsdeProblem& problem, const InitialCondition& ic,
                      const BrownianEnsemble& noise, SchemeOptions scheme = {});

/// Pathwise image of `input` under the Picard operator.
PathEnsemble picard_apply(const FsdeProblem& problem, const InitialCondition& ic,
                          const BrownianEnsemble& noise, const PathEnsemble& input,
                          SchemeOptions scheme = {});

/// Calls `per_path(j, q)` for every path, where `q` has one slot per node,
/// and accumulates q in fixed blocks of paths merged in block order, so the
/// moments are identical for any thread count. `per_path` returns
/// PathIntegrator::kFinite or the blow-up node.
MomentAccumulator accumulate_paths(std::size_t n_paths, std::size_t n_nodes,
                                   const std::function<std::size_t(std::size_t, std::span<double>)>& per_path);

struct PicardHistory {
  std::vector<PathEnsemble> iterates;  ///< xi_0 = eta, xi_1, ...
  std::vector<double> distances;       ///< d_n = |xi_{n+1} - xi_n|_gamma
  std::vector<double> distance_stderr;
  WeightedNormConfig config;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Iterates xi_{n+1} = T xi_n from the constant process xi_0 = eta until
/// d_n <= tol or max_iter applications. A gamma at or below the contraction
/// threshold only adds a warning. Throws GridMismatchError when the config
/// grid differs from the noise grid.
PicardHistory picard_solve(const FsdeProblem& problem, const InitialCondition& ic,
                           const BrownianEnsemble& noise, const WeightedNormConfig& config,
                           double tol, std::size_t max_iter, SchemeOptions scheme = {});

namespace reference {
/// Direct sequential evaluation of the scheme, every kernel value computed
/// from its formula. Slow; used to check the kernels.
PathEnsemble solve_em(const FsdeProblem& problem, const InitialCondition& ic,
                      const BrownianEnsemble& noise, SchemeOptions scheme = {});
PathEnsemble picard_apply(const FsdeProblem& problem, const InitialCondition& ic,
                          const BrownianEnsemble& noise, const PathEnsemble& input,
                          SchemeOptions scheme = {});
}  // namespace reference

/// Long-format CSV: header `path,t,component,value`, 17 significant digits.
/// `max_paths` limits the export to the first paths (0 = all).
void write_paths_csv(const PathEnsemble& ensemble, const std::filesystem::path& file,
                     std::size_t max_paths = 0, const std::string& comment = {});

/// Binary replay format: magic "FSDEPTH1", u32 provenance lengths and
/// strings (problem, scheme), u64 seed, f64 horizon, u64 n_steps, u64
/// n_paths, u64 dim, then f64 states.
void write_paths_binary(const PathEnsemble& ensemble, const std::filesystem::path& file);
PathEnsemble read_paths_binary(const std::filesystem::path& file);

}  // namespace fsde
