// Times the parallel kernels against the sequential reference implementation
// and reports the largest state difference between them.

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "fsde/models.hpp"
#include "fsde/solver.hpp"
#include "fsde/stochastic.hpp"

namespace {

double seconds(const std::function<void()>& f, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

double max_difference(const fsde::PathEnsemble& a, const fsde::PathEnsemble& b) {
  double worst = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel benchmark: parallel versus reference"};
  std::size_t paths = 256;
  std::size_t steps = 512;
  int repeats = 3;
  app.add_option("--paths", paths, "number of paths");
  app.add_option("--steps", steps, "number of time steps on [0, 1]");
  app.add_option("--repeats", repeats, "timing repetitions (best is reported)");
  CLI11_PARSE(app, argc, argv);

  const auto grid = fsde::make_grid(1.0, steps);
  const auto problem = fsde::builtin("scalar_linear", {{"alpha", 0.75}, {"a", -1.0}, {"s", 0.5}});
  const auto ic = fsde::InitialCondition::deterministic({1.0});
  const auto noise = fsde::sample_ensemble(grid, paths, 7).materialize();

  std::printf("threads %d, paths %zu, steps %zu\n", omp_get_max_threads(), paths, steps);

  const double t_noise_ref = seconds([&] { (void)fsde::reference::brownian_increments(grid, paths, 7); }, repeats);
  const double t_noise_par = seconds([&] { (void)fsde::sample_ensemble(grid, paths, 7).materialize(); }, repeats);
  std::printf("%-22s reference %9.4f s  parallel %9.4f s  speedup %6.2f\n", "brownian increments",
              t_noise_ref, t_noise_par, t_noise_ref / t_noise_par);

  fsde::PathEnsemble ref(grid, paths, 1), par(grid, paths, 1);
  const double t_em_ref = seconds([&] { ref = fsde::reference::solve_em(problem, ic, noise); }, repeats);
  const double t_em_par = seconds([&] { par = fsde::solve_em(problem, ic, noise); }, repeats);
  std::printf("%-22s reference %9.4f s  parallel %9.4f s  speedup %6.2f  max |diff| %.3e\n", "solve_em",
              t_em_ref, t_em_par, t_em_ref / t_em_par, max_difference(ref, par));

  fsde::PathEnsemble pref(grid, paths, 1), ppar(grid, paths, 1);
  const double t_pi_ref = seconds([&] { pref = fsde::reference::picard_apply(problem, ic, noise, par); }, repeats);
  const double t_pi_par = seconds([&] { ppar = fsde::picard_apply(problem, ic, noise, par); }, repeats);
  std::printf("%-22s reference %9.4f s  parallel %9.4f s  speedup %6.2f  max |diff| %.3e\n", "picard_apply",
              t_pi_ref, t_pi_par, t_pi_ref / t_pi_par, max_difference(pref, ppar));
  return 0;
}
