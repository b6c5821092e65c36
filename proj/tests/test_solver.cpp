#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fsde/analysis.hpp"
#include "fsde/errors.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"

using namespace fsde;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fsde_test_solver";
  std::filesystem::create_directories(dir);
  return dir / name;
}

double max_abs_diff(const PathEnsemble& a, const PathEnsemble& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

FsdeProblem linear(double alpha, double a, double s) {
  return builtin("scalar_linear", {{"alpha", alpha}, {"a", a}, {"s", s}});
}

}  // namespace

TEST_CASE("stochastic weight names") {
  CHECK(to_string(StochasticWeight::left_point) == "left_point");
  CHECK(stochastic_weight_from_string("l2_exact") == StochasticWeight::l2_exact);
  CHECK_THROWS_AS(stochastic_weight_from_string("midpoint"), DomainError);
}

TEST_CASE("drift weights integrate the kernel exactly") {
  for (double alpha : {0.55, 0.75, 0.95}) {
    const auto g = make_grid(3.0, 300);
    const KernelWeights w(g, alpha);
    for (std::size_t n : {1u, 7u, 150u, 300u}) {
      double sum = 0.0;
      for (std::size_t m = 1; m <= n; ++m) sum += w.drift(m);
      const double exact = std::pow(g.node(n), alpha) / (alpha * gamma_fn(alpha));
      INFO("alpha = " << alpha << ", n = " << n);
      CHECK(std::abs(sum - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("noise weights match their formulas") {
  const double alpha = 0.7;
  const auto g = make_grid(2.0, 40);
  const double h = g.step();
  const KernelWeights lp(g, alpha, {StochasticWeight::left_point});
  const KernelWeights l2(g, alpha, {StochasticWeight::l2_exact});
  for (std::size_t m = 1; m <= 40; ++m) {
    const double md = static_cast<double>(m);
    CHECK(lp.noise(m) == doctest::Approx(std::pow(md * h, alpha - 1.0) / gamma_fn(alpha)).epsilon(1e-13));
    // Squared l2 weights times h are the exact integrals of the squared kernel.
    const double b = 2.0 * alpha - 1.0;
    const double integral = (std::pow(md * h, b) - std::pow((md - 1.0) * h, b)) / b;
    CHECK(l2.noise(m) * l2.noise(m) * h * gamma_fn(alpha) * gamma_fn(alpha) ==
          doctest::Approx(integral).epsilon(1e-12));
  }
  CHECK_THROWS_AS(KernelWeights(g, 0.5), DomainError);
}

TEST_CASE("zero model keeps every path at eta") {
  const auto g = make_grid(1.0, 50);
  const auto p = builtin("zero", {{"alpha", 0.75}, {"dim", 2}});
  const auto sol = solve_em(p, InitialCondition::deterministic({1.5, -2.0}), sample_ensemble(g, 9, 1));
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t k = 0; k <= 50; ++k) {
      const auto x = sol.state(j, k);
      if (x[0] != 1.5 || x[1] != -2.0) FAIL("path " << j << " node " << k);
    }
}

TEST_CASE("parallel kernels match the reference implementation") {
  const auto g = make_grid(1.0, 96);
  const auto noise = sample_ensemble(g, 20, 5);
  const auto ic = InitialCondition::gaussian({0.5}, 0.3, 8);
  for (auto w : {StochasticWeight::left_point, StochasticWeight::l2_exact}) {
    for (const auto& p : {linear(0.75, -1.0, 0.5),
                          builtin("bounded_nonlinear", {{"alpha", 0.6}, {"a", 1.0}, {"s", 0.8}})}) {
      INFO(p.name << " " << to_string(w));
      const auto fast = solve_em(p, ic, noise, {w});
      const auto slow = reference::solve_em(p, ic, noise, {w});
      CHECK(max_abs_diff(fast, slow) < 1e-12);
      const auto fast_t = picard_apply(p, ic, noise, fast, {w});
      const auto slow_t = reference::picard_apply(p, ic, noise, fast, {w});
      CHECK(max_abs_diff(fast_t, slow_t) < 1e-12);
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto g = make_grid(1.0, 128);
  const auto noise = sample_ensemble(g, 70, 3);
  const auto p = builtin("matrix_linear", {{"alpha", 0.8}, {"A", {{-1.0, 0.2}, {0.0, -0.5}}}, {"B", {{0.3, 0.0}, {0.1, 0.2}}}});
  const auto ic = InitialCondition::deterministic({1.0, -1.0});
  omp_set_num_threads(1);
  const auto one = solve_em(p, ic, noise);
  const auto one_t = picard_apply(p, ic, noise, one);
  for (int threads : {2, 3, 4}) {
    omp_set_num_threads(threads);
    CHECK(solve_em(p, ic, noise) == one);
    CHECK(picard_apply(p, ic, noise, one) == one_t);
  }
  omp_set_num_threads(1);
}

TEST_CASE("solutions are adapted: future increments do not change the past") {
  const auto g = make_grid(1.0, 64);
  const auto p = linear(0.7, -0.8, 1.2);
  const PathIntegrator integrator(p, g);
  std::vector<double> dw(64), a(65), b(65);
  sample_ensemble(g, 1, 12).path_increments(0, dw);
  const std::vector<double> eta = {1.0};
  integrator.solve(eta, dw, a);
  for (std::size_t k = 30; k < 64; ++k) dw[k] += 1.0;
  integrator.solve(eta, dw, b);
  CHECK(std::equal(a.begin(), a.begin() + 31, b.begin()));
  CHECK(a[31] != b[31]);
}

TEST_CASE("deterministic linear equation converges to the Mittag-Leffler solution") {
  const auto rep = deterministic_convergence(0.75, -1.0, 1.0, 1.0, {32, 64, 128, 256});
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.strictly_decreasing);
  CHECK(rep.passes);
  CHECK(rep.rows.back().sup_error < 1e-2);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].ratio <= 0.75);
}

TEST_CASE("constant diffusion has the fractional Brownian variance") {
  // Var X(1) = 1 / ((2 alpha - 1) Gamma(alpha)^2); the l2 weights reproduce it
  // exactly in expectation.
  const double alpha = 0.75;
  const auto g = make_grid(1.0, 128);
  const auto p = builtin("constant_diffusion", {{"alpha", alpha}, {"s", 1.0}});
  const auto sol = solve_em(p, InitialCondition::deterministic({0.0}), sample_ensemble(g, 4000, 21),
                            {StochasticWeight::l2_exact});
  const auto est = ms_norm(sol, 128);
  const double var = est.value * est.value;
  const double exact = 1.0 / ((2.0 * alpha - 1.0) * gamma_fn(alpha) * gamma_fn(alpha));
  CHECK(exact == doctest::Approx(1.3318).epsilon(1e-4));
  CHECK(std::abs(var - exact) < 4.0 * 2.0 * est.value * est.stderr);
}

TEST_CASE("one Picard step from a constant has a closed form") {
  const double alpha = 0.65, a = -1.3, eta = 2.0;
  const auto g = make_grid(2.0, 100);
  const auto p = linear(alpha, a, 0.0);
  const auto noise = sample_ensemble(g, 3, 0);
  const auto ic = InitialCondition::deterministic({eta});
  PathEnsemble xi0(g, 3, 1);
  for (std::size_t j = 0; j < 3; ++j) std::fill(xi0.path(j).begin(), xi0.path(j).end(), eta);
  const auto xi1 = picard_apply(p, ic, noise, xi0);
  for (std::size_t k = 0; k <= 100; ++k) {
    const double t = g.node(k);
    const double exact = eta * (1.0 + a * std::pow(t, alpha) / gamma_fn(alpha + 1.0));
    CHECK(xi1.state(1, k)[0] == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("picard_solve on the zero model stops after one step") {
  const auto g = make_grid(1.0, 32);
  const auto p = builtin("zero", {{"alpha", 0.75}});
  const auto h = picard_solve(p, InitialCondition::deterministic({1.0}), sample_ensemble(g, 10, 4),
                              make_weighted_norm_config(g, 1.0, 0.75), 1e-12, 20);
  CHECK(h.converged);
  REQUIRE(h.distances.size() == 1);
  CHECK(h.distances[0] == 0.0);
  CHECK(h.iterates.size() == 2);
}

TEST_CASE("the Picard limit is the Euler-Maruyama solution") {
  const auto g = make_grid(1.0, 64);
  const auto p = linear(0.75, -1.0, 0.5);
  const auto noise = sample_ensemble(g, 40, 6);
  const auto ic = InitialCondition::deterministic({1.0});
  const double gamma = 2.0 * gamma_threshold(p.lipschitz, 1.0, 0.75);
  // Node n of T(xi) only reads xi at nodes below n, so n_steps applications
  // reach the discrete fixed point regardless of the weighted tolerance.
  const auto h = picard_solve(p, ic, noise, make_weighted_norm_config(g, gamma, 0.75), 1e-300, 66);
  CHECK(h.converged);
  const auto em = solve_em(p, ic, noise);
  CHECK(max_abs_diff(h.iterates.back(), em) < 1e-11);
  // EM is a fixed point of the discrete operator.
  CHECK(max_abs_diff(picard_apply(p, ic, noise, em), em) < 1e-13);
  for (std::size_t i = 1; i < h.distances.size(); ++i) CHECK(h.distances[i] <= h.distances[i - 1]);
}

TEST_CASE("picard_solve warnings and argument checks") {
  const auto g = make_grid(1.0, 32);
  const auto p = linear(0.75, -1.0, 0.5);
  const auto noise = sample_ensemble(g, 10, 4);
  const auto ic = InitialCondition::deterministic({1.0});
  const auto low = picard_solve(p, ic, noise, make_weighted_norm_config(g, 0.1, 0.75), 1e-30, 3);
  CHECK_FALSE(low.converged);
  CHECK(low.warnings.size() == 2);
  CHECK_THROWS_AS(picard_solve(p, ic, noise, make_weighted_norm_config(make_grid(1.0, 16), 1.0, 0.75), 1e-8, 3),
                  GridMismatchError);
  CHECK_THROWS_AS(picard_solve(p, ic, noise, make_weighted_norm_config(g, 1.0, 0.6), 1e-8, 3), DomainError);
}

TEST_CASE("blow-up and shape errors") {
  const auto g = make_grid(1.0, 8);
  auto bad = [](double t, std::span<const double>, std::span<double> out) {
    out[0] = t >= 0.5 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  auto none = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  const auto p = make_problem("bad", 0.75, 1, bad, none, 1.0);
  try {
    solve_em(p, InitialCondition::deterministic({1.0}), sample_ensemble(g, 4, 0));
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.path() == 0);
    CHECK(e.node() == 5);
  }
  CHECK_THROWS_AS(reference::solve_em(p, InitialCondition::deterministic({1.0}), sample_ensemble(g, 4, 0)),
                  BlowUpError);

  const auto lin = linear(0.75, -1.0, 0.5);
  CHECK_THROWS_AS(solve_em(lin, InitialCondition::deterministic({1.0, 2.0}), sample_ensemble(g, 4, 0)),
                  DomainError);
  const PathEnsemble other(make_grid(1.0, 16), 4, 1);
  CHECK_THROWS_AS(picard_apply(lin, InitialCondition::deterministic({1.0}), sample_ensemble(g, 4, 0), other),
                  GridMismatchError);
  CHECK_THROWS_AS(PathEnsemble(g, 0, 1), DomainError);
}

TEST_CASE("path ensembles round-trip through the binary format") {
  const auto g = make_grid(1.0, 16);
  const auto p = builtin("bounded_nonlinear", {{"alpha", 0.8}, {"a", 1.0}, {"s", 1.0}, {"dim", 2}});
  const auto sol = solve_em(p, InitialCondition::deterministic({0.1, 0.2}), sample_ensemble(g, 5, 31));
  write_paths_binary(sol, scratch("p.bin"));
  const auto back = read_paths_binary(scratch("p.bin"));
  CHECK(back == sol);
  CHECK(back.provenance().problem == "bounded_nonlinear");
  CHECK(back.provenance().scheme == "left_point");
  CHECK(back.provenance().seed == 31);

  write_paths_csv(sol, scratch("p.csv"), 2, "demo");
  std::ifstream in(scratch("p.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# demo");
  std::getline(in, line);
  CHECK(line == "path,t,component,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * 17 * 2);
}
