#include "fsde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/specfun.hpp"

namespace fsde {
namespace {

constexpr double kWindowFractions[] = {0.25, 0.5, 0.75};

void check_fraction(double f) {
  if (!(f > 0.0 && f < 1.0)) throw DomainError("tail_fraction must lie in (0, 1)");
}

double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

// Slope of log D on log t over nodes [first, end) with positive D.
LineFit tail_fit(const std::vector<double>& t, const std::vector<double>& d, std::size_t first) {
  std::vector<double> x, y;
  for (std::size_t k = first; k < t.size(); ++k) {
    if (t[k] > 0.0 && d[k] > 0.0) {
      x.push_back(std::log(t[k]));
      y.push_back(std::log(d[k]));
    }
  }
  return least_squares(x, y);
}

}  // namespace

ContractionReport contraction_diagnostic(std::span<const double> distances,
                                         std::span<const double> stderrs, double kappa_value) {
  if (distances.size() < 2) {
    throw DomainError("contraction diagnostic needs at least three iterates");
  }
  if (stderrs.size() != distances.size()) throw DomainError("one standard error per distance required");
  ContractionReport r;
  r.distances.assign(distances.begin(), distances.end());
  r.distance_stderr.assign(stderrs.begin(), stderrs.end());
  r.kappa = kappa_value;
  r.worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t exceeding = 0;
  bool ok = true;
  for (std::size_t n = 0; n + 1 < distances.size(); ++n) {
    const double d0 = distances[n];
    const double d1 = distances[n + 1];
    if (d0 <= 0.0) continue;
    const double ratio = d1 / d0;
    const double rel0 = stderrs[n] / d0;
    const double rel1 = d1 > 0.0 ? stderrs[n + 1] / d1 : 0.0;
    const double se = ratio * std::sqrt(rel0 * rel0 + rel1 * rel1);
    r.ratios.push_back(ratio);
    r.ratio_stderr.push_back(se);
    if (ratio > kappa_value) ++exceeding;
    if (ratio > kappa_value + 3.0 * se) ok = false;
    const double excess = se > 0.0 ? (ratio - kappa_value) / se
                                   : (ratio > kappa_value ? std::numeric_limits<double>::infinity()
                                                          : -std::numeric_limits<double>::infinity());
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  r.fraction_exceeding =
      r.ratios.empty() ? 0.0 : static_cast<double>(exceeding) / static_cast<double>(r.ratios.size());
  r.passes = ok;
  return r;
}

ContractionReport contraction_diagnostic(const PicardHistory& history, double kappa_value) {
  return contraction_diagnostic(history.distances, history.distance_stderr, kappa_value);
}

MsSeries ms_distance_series(const FsdeProblem& problem, const InitialCondition& ic_a,
                            const InitialCondition& ic_b, const BrownianEnsemble& noise,
                            SchemeOptions scheme) {
  if (ic_a.dim() != problem.dim || ic_b.dim() != problem.dim) {
    throw DomainError("initial condition dimension mismatch");
  }
  const TimeGrid& grid = noise.grid();
  const PathIntegrator integrator(problem, grid, scheme);
  const std::size_t d = problem.dim;
  const std::size_t n_nodes = grid.n_nodes();
  auto per_path = [&](std::size_t j, std::span<double> q) -> std::size_t {
    thread_local std::vector<double> dw, xa, xb, eta_a, eta_b;
    dw.resize(grid.n_steps());
    xa.resize(n_nodes * d);
    xb.resize(n_nodes * d);
    eta_a.resize(d);
    eta_b.resize(d);
    noise.path_increments(j, dw);
    ic_a.draw(j, eta_a);
    ic_b.draw(j, eta_b);
    if (const auto bad = integrator.solve(eta_a, dw, xa); bad != PathIntegrator::kFinite) return bad;
    if (const auto bad = integrator.solve(eta_b, dw, xb); bad != PathIntegrator::kFinite) return bad;
    for (std::size_t k = 0; k < n_nodes; ++k) q[k] = squared_distance(&xa[k * d], &xb[k * d], d);
    return PathIntegrator::kFinite;
  };
  return accumulate_paths(noise.n_paths(), n_nodes, per_path).ms_series();
}

MsSeries ms_solution_series(const FsdeProblem& problem, const InitialCondition& ic,
                            const BrownianEnsemble& noise, SchemeOptions scheme) {
  if (ic.dim() != problem.dim) throw DomainError("initial condition dimension mismatch");
  const TimeGrid& grid = noise.grid();
  const PathIntegrator integrator(problem, grid, scheme);
  const std::size_t d = problem.dim;
  const std::size_t n_nodes = grid.n_nodes();
  const std::vector<double> origin(d, 0.0);
  auto per_path = [&](std::size_t j, std::span<double> q) -> std::size_t {
    thread_local std::vector<double> dw, x, eta;
    dw.resize(grid.n_steps());
    x.resize(n_nodes * d);
    eta.resize(d);
    noise.path_increments(j, dw);
    ic.draw(j, eta);
    if (const auto bad = integrator.solve(eta, dw, x); bad != PathIntegrator::kFinite) return bad;
    for (std::size_t k = 0; k < n_nodes; ++k) q[k] = squared_distance(&x[k * d], origin.data(), d);
    return PathIntegrator::kFinite;
  };
  return accumulate_paths(noise.n_paths(), n_nodes, per_path).ms_series();
}

std::size_t tail_start(const TimeGrid& grid, double tail_fraction) {
  check_fraction(tail_fraction);
  const double t0 = (1.0 - tail_fraction) * grid.horizon();
  std::size_t k = 1;
  while (k < grid.n_steps() && grid.node(k) < t0) ++k;
  return k;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("least squares needs equally long inputs");
  LineFit fit;
  fit.points = x.size();
  if (x.size() < 2) {
    fit.slope = fit.intercept = fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2 && sxx > 0.0) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      rss += e * e;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

SeparationReport separation_experiment(const FsdeProblem& problem, const InitialCondition& eta,
                                       const InitialCondition& zeta, const BrownianEnsemble& noise,
                                       const SeparationOptions& options) {
  check_fraction(options.tail_fraction);
  if (!(options.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(options.slope_margin >= 0.0)) throw DomainError("slope margin must be non-negative");
  if (eta.is_deterministic() && zeta.is_deterministic() && eta.value() == zeta.value()) {
    throw DomainError("separation needs distinct initial conditions (eta = zeta)");
  }
  const MsSeries series = ms_distance_series(problem, eta, zeta, noise, options.scheme);
  if (!(series.estimate[0] > 0.0)) {
    throw DomainError("separation needs distinct initial conditions (distance at t = 0 is zero)");
  }

  SeparationReport r;
  r.alpha = problem.alpha;
  r.t = noise.grid().nodes();
  r.distance = series.estimate;
  r.stderr = series.stderr;
  r.tail_fraction = options.tail_fraction;
  r.tail_begin = tail_start(noise.grid(), options.tail_fraction);
  r.epsilon = options.epsilon;
  r.slope_margin = options.slope_margin;
  const double exponent = (1.0 - problem.alpha) / (2.0 * problem.alpha);
  r.floor = -exponent;
  r.fit = tail_fit(r.t, r.distance, r.tail_begin);
  r.passes = std::isfinite(r.fit.slope) && r.fit.slope >= r.floor - r.slope_margin;

  const double power = exponent + options.epsilon;
  for (std::size_t k = r.tail_begin; k + 1 < r.t.size(); ++k) {
    const double s0 = std::pow(r.t[k], power);
    const double s1 = std::pow(r.t[k + 1], power);
    const double se = std::hypot(s0 * r.stderr[k], s1 * r.stderr[k + 1]);
    if (s1 * r.distance[k + 1] < s0 * r.distance[k] - 3.0 * se) ++r.monotone_violations;
  }
  r.tail_monotone = r.monotone_violations == 0;

  for (double f : kWindowFractions) {
    r.window_slopes.push_back({f, tail_fit(r.t, r.distance, tail_start(noise.grid(), f)).slope});
  }
  return r;
}

LyapunovReport lyapunov_experiment(const LinearFsde& linear, const InitialCondition& ic,
                                   const BrownianEnsemble& noise, const LyapunovOptions& options) {
  check_fraction(options.tail_fraction);
  if (!(options.tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
  if (ic.is_deterministic()) {
    const auto& v = ic.value();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
      throw DomainError("Lyapunov exponent needs a nonzero initial condition");
    }
  } else if (ic.ms_norm() == 0.0) {
    throw DomainError("Lyapunov exponent needs a nonzero initial condition");
  }
  const FsdeProblem problem = to_problem(linear);
  const MsSeries series = ms_solution_series(problem, ic, noise, options.scheme);
  const TimeGrid& grid = noise.grid();

  LyapunovReport r;
  r.tail_fraction = options.tail_fraction;
  r.tolerance = options.tolerance;
  for (std::size_t k = 1; k < grid.n_nodes(); ++k) {
    const double t = grid.node(k);
    r.t.push_back(t);
    r.ms.push_back(series.estimate[k]);
    r.ms_stderr.push_back(series.stderr[k]);
    r.exponent.push_back(std::log(series.estimate[k]) / t);
  }
  auto tail_max = [&](std::size_t first, double& at) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < r.exponent.size(); ++i) {
      if (r.exponent[i] > best) {
        best = r.exponent[i];
        at = r.t[i];
      }
    }
    return best;
  };
  r.tail_begin = tail_start(grid, options.tail_fraction) - 1;
  r.estimate = tail_max(r.tail_begin, r.estimate_time);
  r.passes = r.estimate >= -options.tolerance;
  for (double f : kWindowFractions) {
    double at = 0.0;
    r.window_estimates.push_back({f, tail_max(tail_start(grid, f) - 1, at)});
  }
  return r;
}

ConvergenceReport deterministic_convergence(double alpha, double a, double eta, double horizon,
                                            const std::vector<std::size_t>& levels, double max_ratio) {
  if (levels.size() < 2) throw DomainError("convergence study needs at least two grid levels");
  ConvergenceReport r;
  r.alpha = alpha;
  r.a = a;
  r.eta = eta;
  r.horizon = horizon;
  r.max_ratio = max_ratio;
  const FsdeProblem problem = builtin("scalar_linear", {{"alpha", alpha}, {"a", a}, {"s", 0.0}});
  const auto ic = InitialCondition::deterministic({eta});
  bool decreasing = true;
  bool within = true;
  for (std::size_t n : levels) {
    const TimeGrid grid = make_grid(horizon, n);
    const auto paths = solve_em(problem, ic, sample_ensemble(grid, 1, 0));
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
      const double t = grid.node(k);
      const double exact = eta * mittag_leffler({alpha, a * std::pow(t, alpha)});
      err = std::max(err, std::abs(paths.state(0, k)[0] - exact));
    }
    ConvergenceRow row{n, grid.step(), err, 0.0};
    if (!r.rows.empty()) {
      row.ratio = err / r.rows.back().sup_error;
      decreasing = decreasing && err < r.rows.back().sup_error;
      within = within && row.ratio <= max_ratio;
    }
    r.rows.push_back(row);
  }
  r.strictly_decreasing = decreasing;
  r.passes = decreasing && within;
  return r;
}

}  // namespace fsde
