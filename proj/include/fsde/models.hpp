#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsde/stochastic.hpp"

namespace fsde {

/// Coefficient callback: writes f(t, x) into `out`. Must be pure; the
/// solver calls it concurrently from several threads.
using Coefficient = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// Caputo FSDE  D^alpha X = b(t, X) + sigma(t, X) dW/dt  driven by one scalar
/// Brownian motion, with a user-declared Lipschitz constant.
struct FsdeProblem {
  std::string name;
  double alpha = 0.75;
  std::size_t dim = 1;
  Coefficient drift;
  Coefficient diffusion;
  double lipschitz = 0.0;
  nlohmann::json params = nlohmann::json::object();
};

/// Validates alpha in (1/2, 1), dim >= 1, lipschitz >= 0 and both callbacks.
FsdeProblem make_problem(std::string name, double alpha, std::size_t dim, Coefficient drift,
                         Coefficient diffusion, double lipschitz);

/// Row-major d x d matrix-valued function of time.
using MatrixFunction = std::function<void(double t, std::span<double> out)>;

/// Bilinear system  D^alpha x = A(t) x + B(t) x dW/dt.
struct LinearFsde {
  double alpha = 0.75;
  std::size_t dim = 1;
  MatrixFunction a;
  MatrixFunction b;
  double a_bound = 0.0;  ///< ess sup of the operator norm of A
  double b_bound = 0.0;
};

/// Time-invariant linear system; bounds are the Frobenius norms (which
/// dominate the operator norms).
LinearFsde constant_linear(double alpha, std::size_t dim, std::vector<double> a,
                           std::vector<double> b);

/// Drift x -> A(t) x, diffusion x -> B(t) x, L = a_bound + b_bound.
FsdeProblem to_problem(const LinearFsde& linear);

/// Largest Frobenius norm of A and B over the grid nodes, for checking the
/// declared bounds.
struct LinearBoundReport {
  double max_a = 0.0;
  double max_b = 0.0;
  bool within_declared = true;
};
LinearBoundReport check_linear_bounds(const LinearFsde& linear, const TimeGrid& grid);

/// Built-in families. Parameters (JSON object):
///  - zero:               alpha, dim=1                b = 0, sigma = 0, L = 0
///  - constant_diffusion: alpha, s, dim=1             b = 0, sigma = s, L = 0
///  - scalar_linear:      alpha, a, s                 b = a x, sigma = s x, L = max(|a|, |s|)
///  - matrix_linear:      alpha, A, B (nested rows)   L = |A|_F + |B|_F
///  - bounded_nonlinear:  alpha, a, s, dim=1          b = a sin x, sigma = s cos x, L = max(|a|, |s|)
/// Throws DomainError for unknown names and missing/invalid parameters.
FsdeProblem builtin(const std::string& name, const nlohmann::json& params);

/// Builds a problem from a config object whose "model" key names the family
/// and whose remaining keys are its parameters.
FsdeProblem problem_from_json(const nlohmann::json& spec);

/// Deterministic vector, or a reproducible i.i.d. sampler indexed by path.
class InitialCondition {
 public:
  using Sampler = std::function<void(std::size_t path, std::span<double> out)>;

  static InitialCondition deterministic(std::vector<double> eta);
  /// `draw` must be a pure function of the path index.
  static InitialCondition sampled(std::size_t dim, Sampler draw, std::string label);
  /// Independent N(mean_i, stddev^2) components from a counter-based stream.
  static InitialCondition gaussian(std::vector<double> mean, double stddev, std::uint64_t seed);

  std::size_t dim() const noexcept { return dim_; }
  bool is_deterministic() const noexcept { return !sampler_; }
  const std::vector<double>& value() const;  ///< deterministic only
  const std::string& label() const noexcept { return label_; }

  void draw(std::size_t path, std::span<double> out) const;
  /// sqrt(E|eta|^2): exact when deterministic, a sample mean otherwise.
  double ms_norm(std::size_t n_samples = 10000) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> value_;
  Sampler sampler_;
  std::string label_;
};

/// Box sampling used to falsify the Lipschitz hypothesis.
struct H1SampleSpec {
  double horizon = 1.0;
  double box_half_width = 10.0;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
};

/// Sampled Lipschitz ratios. `max_ratio` is max(|db|, |dsigma|) / |dx|, the
/// per-coefficient constant that enters the contraction estimate and decides
/// `passes`; `max_sum_ratio` is (|db| + |dsigma|) / |dx|, the stricter sum
/// form, reported alongside.
struct H1Report {
  double declared = 0.0;
  double max_ratio = 0.0;
  double max_sum_ratio = 0.0;
  std::size_t samples = 0;
  bool passes = false;
  bool sum_form_passes = false;
};

H1Report check_h1(const FsdeProblem& problem, const H1SampleSpec& spec);

struct H2Report {
  double sup_diffusion_at_zero = 0.0;  ///< max_k |sigma(t_k, 0)|
  double drift_l2_integral = 0.0;      ///< trapezoid estimate of int |b(s, 0)|^2 ds
};

H2Report check_h2(const FsdeProblem& problem, const TimeGrid& grid);

}  // namespace fsde
