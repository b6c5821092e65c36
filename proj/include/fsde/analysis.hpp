#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsde/models.hpp"
#include "fsde/norms.hpp"
#include "fsde/solver.hpp"

namespace fsde {

/// Ratios d_{n+1} / d_n of successive Picard distances against kappa.
struct ContractionReport {
  std::vector<double> distances;
  std::vector<double> distance_stderr;
  std::vector<double> ratios;
  std::vector<double> ratio_stderr;
  double kappa = 0.0;
  double fraction_exceeding = 0.0;  ///< share of ratios above kappa (point estimate)
  double worst_excess = 0.0;        ///< max (ratio - kappa) / stderr, or +inf with zero stderr
  bool passes = false;              ///< every ratio <= kappa + 3 stderr
};

/// Needs at least two distances (three iterates). A ratio with a zero
/// denominator is skipped: the iteration has already stopped moving.
ContractionReport contraction_diagnostic(std::span<const double> distances,
                                         std::span<const double> stderrs, double kappa_value);
ContractionReport contraction_diagnostic(const PicardHistory& history, double kappa_value);

/// sqrt(E|X_a(t_k) - X_b(t_k)|^2) for two solutions driven by the same noise,
/// without storing paths. With `ic_b` deterministic zero and the zero problem
/// this is the ms norm of X_a.
MsSeries ms_distance_series(const FsdeProblem& problem, const InitialCondition& ic_a,
                            const InitialCondition& ic_b, const BrownianEnsemble& noise,
                            SchemeOptions scheme = {});

/// sqrt(E|X(t_k)|^2) of the solution, without storing paths.
MsSeries ms_solution_series(const FsdeProblem& problem, const InitialCondition& ic,
                            const BrownianEnsemble& noise, SchemeOptions scheme = {});

/// First node of the window t_k >= (1 - tail_fraction) T, never node 0.
std::size_t tail_start(const TimeGrid& grid, double tail_fraction);

/// Least-squares line y = intercept + slope x with the slope's standard error.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct WindowEstimate {
  double tail_fraction = 0.0;
  double value = 0.0;
};

struct SeparationOptions {
  double epsilon = 0.05;
  double tail_fraction = 0.5;
  double slope_margin = 0.05;
  SchemeOptions scheme;
};

struct SeparationReport {
  double alpha = 0.0;
  std::vector<double> t;
  std::vector<double> distance;
  std::vector<double> stderr;
  std::size_t tail_begin = 0;
  double tail_fraction = 0.0;
  LineFit fit;                    ///< log D against log t on the tail
  double floor = 0.0;             ///< -(1 - alpha) / (2 alpha)
  double slope_margin = 0.0;
  bool passes = false;            ///< fit.slope >= floor - slope_margin
  double epsilon = 0.0;
  bool tail_monotone = false;     ///< advisory: t^(-floor + eps) D(t) non-decreasing within 3 stderr
  std::size_t monotone_violations = 0;
  std::vector<WindowEstimate> window_slopes;
};

/// Solves from eta and zeta on the same noise and fits the tail decay of
/// their mean-square distance. Throws DomainError when the distance at
/// t = 0 vanishes (eta = zeta) or the options are out of range.
SeparationReport separation_experiment(const FsdeProblem& problem, const InitialCondition& eta,
                                       const InitialCondition& zeta, const BrownianEnsemble& noise,
                                       const SeparationOptions& options = {});

struct LyapunovOptions {
  double tail_fraction = 0.5;
  double tolerance = 0.05;
  SchemeOptions scheme;
};

struct LyapunovReport {
  std::vector<double> t;          ///< nodes t_1 .. t_N
  std::vector<double> ms;
  std::vector<double> ms_stderr;
  std::vector<double> exponent;   ///< (1 / t_k) log ms(t_k)
  std::size_t tail_begin = 0;     ///< index into the vectors above
  double tail_fraction = 0.0;
  double estimate = 0.0;          ///< max of `exponent` over the tail
  double estimate_time = 0.0;
  double tolerance = 0.0;
  bool passes = false;            ///< estimate >= -tolerance
  std::vector<WindowEstimate> window_estimates;
};

/// Mean-square Lyapunov exponent surrogate of a linear system. Throws
/// DomainError for a zero initial condition.
LyapunovReport lyapunov_experiment(const LinearFsde& linear, const InitialCondition& ic,
                                   const BrownianEnsemble& noise, const LyapunovOptions& options = {});

struct ConvergenceRow {
  std::size_t n_steps = 0;
  double step = 0.0;
  double sup_error = 0.0;
  double ratio = 0.0;  ///< sup_error / previous sup_error (0 on the first row)
};

struct ConvergenceReport {
  double alpha = 0.0;
  double a = 0.0;
  double eta = 0.0;
  double horizon = 0.0;
  std::vector<ConvergenceRow> rows;
  double max_ratio = 0.0;
  bool strictly_decreasing = false;
  bool passes = false;  ///< strictly decreasing with every ratio <= max_ratio
};

/// Sup-node error of the scheme for D^alpha x = a x, x(0) = eta against
/// eta E_alpha(a t^alpha), for each number of steps in `levels`.
ConvergenceReport deterministic_convergence(double alpha, double a, double eta, double horizon,
                                            const std::vector<std::size_t>& levels,
                                            double max_ratio = 0.75);

}  // namespace fsde
