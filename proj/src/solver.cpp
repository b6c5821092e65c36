#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/solver.hpp"

namespace fsde {

std::string to_string(StochasticWeight w) {
  return w == StochasticWeight::left_point ? "left_point" : "l2_exact";
}

StochasticWeight stochastic_weight_from_string(const std::string& name) {
  if (name == "left_point") return StochasticWeight::left_point;
  if (name == "l2_exact") return StochasticWeight::l2_exact;
  throw DomainError("unknown stochastic weight '" + name + "' (expected left_point or l2_exact)");
}

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t n_paths, std::size_t dim, Provenance provenance)
    : grid_(grid),
      n_paths_(n_paths),
      dim_(dim),
      provenance_(std::move(provenance)),
      states_(n_paths * grid.n_nodes() * dim, 0.0) {
  if (n_paths == 0) throw DomainError("path ensemble needs at least one path");
  if (dim == 0) throw DomainError("state dimension must be at least 1");
}

std::span<double> PathEnsemble::path(std::size_t j) {
  const std::size_t len = grid_.n_nodes() * dim_;
  return {states_.data() + j * len, len};
}

std::span<const double> PathEnsemble::path(std::size_t j) const {
  const std::size_t len = grid_.n_nodes() * dim_;
  return {states_.data() + j * len, len};
}

std::span<const double> PathEnsemble::state(std::size_t j, std::size_t node) const {
  return {states_.data() + (j * grid_.n_nodes() + node) * dim_, dim_};
}

bool PathEnsemble::operator==(const PathEnsemble& other) const {
  return grid_ == other.grid_ && n_paths_ == other.n_paths_ && dim_ == other.dim_ &&
         states_ == other.states_;
}

PicardHistory picard_solve(const FsdeProblem& problem, const InitialCondition& ic,
                           const BrownianEnsemble& noise, const WeightedNormConfig& config,
                           double tol, std::size_t max_iter, SchemeOptions scheme) {
  if (!(tol > 0.0)) throw DomainError("Picard tolerance must be positive");
  if (max_iter < 1) throw DomainError("Picard iteration needs max_iter >= 1");
  if (!(config.grid == noise.grid())) {
    throw GridMismatchError("weighted-norm grid differs from the noise grid");
  }
  if (config.alpha != problem.alpha) {
    throw DomainError("weighted-norm order differs from the problem order");
  }
  if (ic.dim() != problem.dim) throw DomainError("initial condition dimension mismatch");

  PicardHistory history;
  history.config = config;
  const double threshold = gamma_threshold(problem.lipschitz, config.horizon, config.alpha);
  if (!(config.gamma_coef > threshold)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "gamma = %.6g is not above the contraction threshold %.6g; "
                  "the iteration may still converge on the grid",
                  config.gamma_coef, threshold);
    history.warnings.emplace_back(buf);
  }
  const auto weights = log_norm_weights(config);

  PathEnsemble xi0(noise.grid(), noise.n_paths(), problem.dim,
                   {problem.name, "picard/" + to_string(scheme.stochastic_weight), noise.master_seed()});
  std::vector<double> eta(problem.dim);
  for (std::size_t j = 0; j < noise.n_paths(); ++j) {
    ic.draw(j, eta);
    auto p = xi0.path(j);
    for (std::size_t k = 0; k < noise.grid().n_nodes(); ++k) {
      std::copy(eta.begin(), eta.end(), p.begin() + static_cast<std::ptrdiff_t>(k * problem.dim));
    }
  }
  history.iterates.push_back(std::move(xi0));

  for (std::size_t n = 0; n < max_iter; ++n) {
    PathEnsemble next = picard_apply(problem, ic, noise, history.iterates.back(), scheme);
    const auto d = weighted_distance(next, history.iterates.back(), weights);
    history.distances.push_back(d.value);
    history.distance_stderr.push_back(d.stderr);
    history.iterates.push_back(std::move(next));
    if (d.value <= tol) {
      history.converged = true;
      break;
    }
  }
  if (!history.converged) {
    history.warnings.push_back("no convergence after " + std::to_string(max_iter) +
                               " iterations; last distance " +
                               std::to_string(history.distances.back()));
  }
  return history;
}

}  // namespace fsde
