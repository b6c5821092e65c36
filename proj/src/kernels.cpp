#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"

namespace fsde {
namespace {

// m^p - (m - 1)^p without cancellation for large m.
double power_difference(double m, double p) {
  if (m <= 1.0) return 1.0;
  return -std::pow(m, p) * std::expm1(p * std::log1p(-1.0 / m));
}

// sum_i a[i] x[i] + b[i] y[i]. Blocked into kLanes independent partial sums
// so the FMA chains overlap; the summation order depends only on n.
constexpr std::size_t kLanes = 32;

inline double dot2(const double* __restrict a, const double* __restrict x,
                   const double* __restrict b, const double* __restrict y, std::size_t n) {
  double acc[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
#pragma omp simd
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += a[i + l] * x[i + l] + b[i + l] * y[i + l];
  }
  double s = 0.0;
  for (; i < n; ++i) s += a[i] * x[i] + b[i] * y[i];
  for (std::size_t l = 0; l < kLanes; ++l) s += acc[l];
  return s;
}

constexpr std::size_t kBlock = 64;

void check_shapes(const FsdeProblem& problem, const InitialCondition& ic) {
  if (ic.dim() != problem.dim) {
    throw DomainError("initial condition has dimension " + std::to_string(ic.dim()) +
                      ", problem has " + std::to_string(problem.dim));
  }
}

void raise_first_blowup(const std::vector<std::size_t>& status) {
  for (std::size_t j = 0; j < status.size(); ++j) {
    if (status[j] != PathIntegrator::kFinite) throw BlowUpError(j, status[j]);
  }
}

}  // namespace

KernelWeights::KernelWeights(const TimeGrid& grid, double alpha, SchemeOptions scheme)
    : n_steps_(grid.n_steps()), drift_rev_(grid.n_steps()), noise_rev_(grid.n_steps()) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("alpha must lie in (1/2, 1)");
  const double h = grid.step();
  const double inv_gamma = 1.0 / gamma_fn(alpha);
  const double drift_scale = std::pow(h, alpha) / alpha * inv_gamma;
  const double two_a = 2.0 * alpha - 1.0;
  for (std::size_t m = 1; m <= n_steps_; ++m) {
    const double md = static_cast<double>(m);
    drift_rev_[n_steps_ - m] = drift_scale * power_difference(md, alpha);
    double w;
    if (scheme.stochastic_weight == StochasticWeight::left_point) {
      w = std::pow(md * h, alpha - 1.0);
    } else {
      w = std::sqrt(std::pow(h, 2.0 * alpha - 2.0) * power_difference(md, two_a) / two_a);
    }
    noise_rev_[n_steps_ - m] = w * inv_gamma;
  }
}

PathIntegrator::PathIntegrator(const FsdeProblem& problem, const TimeGrid& grid, SchemeOptions scheme)
    : problem_(&problem), grid_(grid), weights_(grid, problem.alpha, scheme) {}

std::size_t PathIntegrator::solve(std::span<const double> eta, std::span<const double> increments,
                                  std::span<double> states) const {
  return run(eta, increments, nullptr, states);
}

std::size_t PathIntegrator::apply(std::span<const double> eta, std::span<const double> increments,
                                  std::span<const double> input, std::span<double> states) const {
  if (input.size() != states.size()) throw GridMismatchError("input path has the wrong length");
  return run(eta, increments, input.data(), states);
}

std::size_t PathIntegrator::run(std::span<const double> eta, std::span<const double> increments,
                                const double* input, std::span<double> states) const {
  const std::size_t n_steps = grid_.n_steps();
  const std::size_t d = problem_->dim;
  if (eta.size() != d || increments.size() != n_steps || states.size() != (n_steps + 1) * d) {
    throw GridMismatchError("path buffers do not match grid and dimension");
  }
  // Coefficient histories per component, contiguous in k: b_c(t_k, .) and
  // sigma_c(t_k, .) dW_k.
  std::vector<double> drift_hist(d * n_steps);
  std::vector<double> noise_hist(d * n_steps);
  std::vector<double> fb(d), fs(d);
  std::copy(eta.begin(), eta.end(), states.begin());
  const double* src = input ? input : states.data();
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const std::size_t k = n - 1;
    const double t = grid_.node(k);
    const std::span<const double> x(src + k * d, d);
    problem_->drift(t, x, fb);
    problem_->diffusion(t, x, fs);
    for (std::size_t c = 0; c < d; ++c) {
      drift_hist[c * n_steps + k] = fb[c];
      noise_hist[c * n_steps + k] = fs[c] * increments[k];
    }
    const double* wd = weights_.drift_for_node(n);
    const double* ws = weights_.noise_for_node(n);
    bool finite = true;
    for (std::size_t c = 0; c < d; ++c) {
      const double v =
          eta[c] + dot2(wd, drift_hist.data() + c * n_steps, ws, noise_hist.data() + c * n_steps, n);
      states[n * d + c] = v;
      finite = finite && std::isfinite(v);
    }
    if (!finite) return n;
  }
  return kFinite;
}

PathEnsemble solve_em(const FsdeProblem& problem, const InitialCondition& ic,
                      const BrownianEnsemble& noise, SchemeOptions scheme) {
  check_shapes(problem, ic);
  const TimeGrid& grid = noise.grid();
  PathEnsemble out(grid, noise.n_paths(), problem.dim,
                   {problem.name, to_string(scheme.stochastic_weight), noise.master_seed()});
  const PathIntegrator integrator(problem, grid, scheme);
  std::vector<std::size_t> status(noise.n_paths(), PathIntegrator::kFinite);
  const auto paths = static_cast<std::int64_t>(noise.n_paths());
#pragma omp parallel
  {
    std::vector<double> dw(grid.n_steps()), eta(problem.dim);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t jj = 0; jj < paths; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      noise.path_increments(j, dw);
      ic.draw(j, eta);
      status[j] = integrator.solve(eta, dw, out.path(j));
    }
  }
  raise_first_blowup(status);
  return out;
}

PathEnsemble picard_apply(const FsdeProblem& problem, const InitialCondition& ic,
                          const BrownianEnsemble& noise, const PathEnsemble& input,
                          SchemeOptions scheme) {
  check_shapes(problem, ic);
  if (!(input.grid() == noise.grid()) || input.n_paths() != noise.n_paths()) {
    throw GridMismatchError("Picard input and noise differ in grid or path count");
  }
  if (input.dim() != problem.dim) throw DomainError("Picard input has the wrong dimension");
  const TimeGrid& grid = noise.grid();
  PathEnsemble out(grid, noise.n_paths(), problem.dim,
                   {problem.name, "picard/" + to_string(scheme.stochastic_weight),
                    noise.master_seed()});
  const PathIntegrator integrator(problem, grid, scheme);
  std::vector<std::size_t> status(noise.n_paths(), PathIntegrator::kFinite);
  const auto paths = static_cast<std::int64_t>(noise.n_paths());
#pragma omp parallel
  {
    std::vector<double> dw(grid.n_steps()), eta(problem.dim);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t jj = 0; jj < paths; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      noise.path_increments(j, dw);
      ic.draw(j, eta);
      status[j] = integrator.apply(eta, dw, input.path(j), out.path(j));
    }
  }
  raise_first_blowup(status);
  return out;
}

MomentAccumulator accumulate_paths(std::size_t n_paths, std::size_t n_nodes,
                                   const std::function<std::size_t(std::size_t, std::span<double>)>& per_path) {
  const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<MomentAccumulator> blocks(n_blocks, MomentAccumulator(n_nodes));
  std::vector<std::size_t> status(n_paths, PathIntegrator::kFinite);
  const auto nb = static_cast<std::int64_t>(n_blocks);
#pragma omp parallel
  {
    std::vector<double> q(n_nodes);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < nb; ++b) {
      const std::size_t first = static_cast<std::size_t>(b) * kBlock;
      const std::size_t last = std::min(n_paths, first + kBlock);
      for (std::size_t j = first; j < last; ++j) {
        status[j] = per_path(j, q);
        if (status[j] == PathIntegrator::kFinite) blocks[static_cast<std::size_t>(b)].add(q);
      }
    }
  }
  raise_first_blowup(status);
  MomentAccumulator total(n_nodes);
  for (const auto& b : blocks) total.merge(b);
  return total;
}

}  // namespace fsde
