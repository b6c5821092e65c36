#include <algorithm>
#include <cmath>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"

namespace fsde::reference {
namespace {

double drift_weight(double tn, double tk, double tk1, double alpha) {
  return (std::pow(tn - tk, alpha) - std::pow(tn - tk1, alpha)) / alpha;
}

double noise_weight(double tn, double tk, double tk1, double alpha, StochasticWeight kind) {
  if (kind == StochasticWeight::left_point) return std::pow(tn - tk, alpha - 1.0);
  const double p = 2.0 * alpha - 1.0;
  return std::sqrt((std::pow(tn - tk, p) - std::pow(tn - tk1, p)) / (p * (tk1 - tk)));
}

// X_n = eta + (1/Gamma(alpha)) sum_{k<n} [w_nk b(t_k, Y_k) + v_nk sigma(t_k, Y_k) dW_k],
// where Y is `input` when given and X itself otherwise.
PathEnsemble run(const FsdeProblem& problem, const InitialCondition& ic,
                 const BrownianEnsemble& noise, const PathEnsemble* input, SchemeOptions scheme) {
  if (ic.dim() != problem.dim) throw DomainError("initial condition dimension mismatch");
  const TimeGrid& grid = noise.grid();
  const std::size_t n_steps = grid.n_steps();
  const std::size_t d = problem.dim;
  const double inv_gamma = 1.0 / gamma_fn(problem.alpha);
  PathEnsemble out(grid, noise.n_paths(), d,
                   {problem.name,
                    (input ? "picard/" : "") + to_string(scheme.stochastic_weight),
                    noise.master_seed()});
  std::vector<double> eta(d), fb(d), fs(d), acc(d);
  for (std::size_t j = 0; j < noise.n_paths(); ++j) {
    ic.draw(j, eta);
    auto x = out.path(j);
    const auto y = input ? input->path(j) : std::span<const double>(x);
    for (std::size_t c = 0; c < d; ++c) x[c] = eta[c];
    for (std::size_t n = 1; n <= n_steps; ++n) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const double tn = grid.node(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double tk = grid.node(k);
        const std::span<const double> yk(y.data() + k * d, d);
        problem.drift(tk, yk, fb);
        problem.diffusion(tk, yk, fs);
        const double w = drift_weight(tn, tk, grid.node(k + 1), problem.alpha);
        const double v = noise_weight(tn, tk, grid.node(k + 1), problem.alpha,
                                      scheme.stochastic_weight);
        const double dw = noise.increment(j, k);
        for (std::size_t c = 0; c < d; ++c) acc[c] += w * fb[c] + v * fs[c] * dw;
      }
      bool finite = true;
      for (std::size_t c = 0; c < d; ++c) {
        x[n * d + c] = eta[c] + inv_gamma * acc[c];
        finite = finite && std::isfinite(x[n * d + c]);
      }
      if (!finite) throw BlowUpError(j, n);
    }
  }
  return out;
}

}  // namespace

PathEnsemble solve_em(const FsdeProblem& problem, const InitialCondition& ic,
                      const BrownianEnsemble& noise, SchemeOptions scheme) {
  return run(problem, ic, noise, nullptr, scheme);
}

PathEnsemble picard_apply(const FsdeProblem& problem, const InitialCondition& ic,
                          const BrownianEnsemble& noise, const PathEnsemble& input,
                          SchemeOptions scheme) {
  if (!(input.grid() == noise.grid()) || input.n_paths() != noise.n_paths()) {
    throw GridMismatchError("Picard input and noise differ in grid or path count");
  }
  return run(problem, ic, noise, &input, scheme);
}

}  // namespace fsde::reference
