#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "fsde/errors.hpp"
#include "fsde/philox.hpp"
#include "fsde/stochastic.hpp"

using namespace fsde;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fsde_test_stochastic";
  std::filesystem::create_directories(dir);
  return dir / name;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using rng::Philox4x32;
  const auto zero = Philox4x32(0)({0, 0, 0, 0});
  CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const auto ones = Philox4x32(0xffffffffffffffffull)({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  const auto pi = Philox4x32(0x299f31d0a4093822ull)({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
  CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("open-unit conversion stays inside (0, 1)") {
  CHECK(rng::to_open_unit(0, 0) > 0.0);
  CHECK(rng::to_open_unit(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("normal quantile reference values and symmetry") {
  CHECK(rng::normal_quantile(0.5) == 0.0);
  CHECK(rng::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(rng::normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-14));
  CHECK(rng::normal_quantile(0.3) == doctest::Approx(-0.5244005127080407).epsilon(1e-15));
  for (double p : {1e-5, 0.01, 0.2, 0.45}) {
    CHECK(rng::normal_quantile(p) == doctest::Approx(-rng::normal_quantile(1.0 - p)).epsilon(1e-9));
  }
  for (double p : {1e-300, 1e-20, 1e-5, 0.01, 0.2, 0.45}) {
    CHECK(normal_cdf(rng::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(std::isfinite(rng::normal_quantile(rng::to_open_unit(0xffffffffu, 0xffffffffu))));
  CHECK(std::isfinite(rng::normal_quantile(rng::to_open_unit(0, 0))));
}

TEST_CASE("stream keys separate seeds, paths and domains") {
  const auto k = rng::stream_key(1, 0);
  CHECK(k != rng::stream_key(2, 0));
  CHECK(k != rng::stream_key(1, 1));
  CHECK(k != rng::stream_key(1, 0, 1));
  CHECK(k == rng::stream_key(1, 0, 0));
}

TEST_CASE("time grid") {
  const auto g = make_grid(20.0, 5120);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(5120) == 20.0);
  CHECK(g.n_nodes() == 5121);
  CHECK(g.step() == doctest::Approx(20.0 / 5120));
  CHECK_THROWS_AS(make_grid(0.0, 10), DomainError);
  CHECK_THROWS_AS(make_grid(-1.0, 10), DomainError);
  CHECK_THROWS_AS(make_grid(1.0, 0), DomainError);
  CHECK(make_grid(1.0, 4) == make_grid(1.0, 4));
  CHECK_FALSE(make_grid(1.0, 4) == make_grid(1.0, 8));
}

TEST_CASE("ensembles are pure functions of (grid, n_paths, seed)") {
  const auto g = make_grid(1.0, 64);
  const auto a = sample_ensemble(g, 50, 42).increments();
  const auto b = sample_ensemble(g, 50, 42).increments();
  CHECK(a == b);
  CHECK(a != sample_ensemble(g, 50, 43).increments());
  // A larger ensemble extends a smaller one path by path.
  const auto big = sample_ensemble(g, 80, 42).increments();
  CHECK(std::equal(a.begin(), a.end(), big.begin()));
}

TEST_CASE("lazy, materialized, reference and any thread count agree bitwise") {
  const auto g = make_grid(2.0, 100);
  const auto ref = reference::brownian_increments(g, 37, 9);
  const auto lazy = sample_ensemble(g, 37, 9);
  for (int threads : {1, 2, 3}) {
    omp_set_num_threads(threads);
    CHECK(lazy.materialize().increments() == ref);
  }
  omp_set_num_threads(1);
  // Reverse-order single draws match too.
  for (std::size_t j = 37; j-- > 0;) {
    for (std::size_t k = 100; k-- > 0;) {
      if (lazy.increment(j, k) != ref[j * 100 + k]) FAIL("mismatch at " << j << "," << k);
    }
  }
}

TEST_CASE("increments look like independent N(0, h)") {
  const auto g = make_grid(1.0, 200);
  const std::size_t paths = 500;
  const auto inc = sample_ensemble(g, paths, 2024).increments();
  const double h = g.step();
  std::vector<double> z(inc.size());
  std::transform(inc.begin(), inc.end(), z.begin(), [h](double x) { return x / std::sqrt(h); });

  const double n = static_cast<double>(z.size());
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= n - 1.0;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));

  // Kolmogorov-Smirnov against the standard normal; 1.63 is the 1% critical value.
  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    ks = std::max({ks, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  CHECK(std::sqrt(n) * ks < 1.63);

  // Neighbouring paths and neighbouring steps are uncorrelated.
  double cross = 0.0, lag = 0.0;
  for (std::size_t j = 0; j + 1 < paths; ++j) {
    for (std::size_t k = 0; k < 200; ++k) cross += inc[j * 200 + k] * inc[(j + 1) * 200 + k];
    for (std::size_t k = 0; k + 1 < 200; ++k) lag += inc[j * 200 + k] * inc[j * 200 + k + 1];
  }
  const double pairs = static_cast<double>((paths - 1) * 200);
  CHECK(std::abs(cross / pairs / h) < 4.0 / std::sqrt(pairs));
  CHECK(std::abs(lag / pairs / h) < 4.0 / std::sqrt(pairs));
}

TEST_CASE("Brownian replay files round-trip bitwise") {
  const auto g = make_grid(1.5, 33);
  const auto e = sample_ensemble(g, 7, 77);
  write_brownian_csv(e, scratch("w.csv"));
  write_brownian_binary(e, scratch("w.bin"));
  const auto from_csv = read_brownian_csv(scratch("w.csv"));
  const auto from_bin = read_brownian_binary(scratch("w.bin"));
  CHECK(from_csv.increments() == e.increments());
  CHECK(from_bin.increments() == e.increments());
  CHECK(from_csv.grid() == g);
  CHECK(from_bin.master_seed() == 77);
  CHECK(from_csv.n_paths() == 7);
}

TEST_CASE("malformed replay files are rejected") {
  {
    std::ofstream out(scratch("bad.csv"));
    out << "# fsde-brownian v1\n# horizon=1,n_steps=3,n_paths=1,master_seed=0\n0.1,0.2\n";
  }
  CHECK_THROWS_AS(read_brownian_csv(scratch("bad.csv")), GridMismatchError);
  {
    std::ofstream out(scratch("bad.bin"), std::ios::binary);
    out << "NOTMAGIC";
  }
  CHECK_THROWS(read_brownian_binary(scratch("bad.bin")));
  CHECK_THROWS(read_brownian_csv(scratch("missing.csv")));
  CHECK_THROWS_AS(BrownianEnsemble::from_increments(make_grid(1.0, 4), 2, 0, std::vector<double>(7)),
                  GridMismatchError);
}
