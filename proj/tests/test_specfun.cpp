#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "fsde/errors.hpp"
#include "fsde/quadrature.hpp"
#include "fsde/specfun.hpp"
#include "oracles/reference_values.hpp"

using namespace fsde;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gauss_kronrod integrates smooth and endpoint-singular integrands") {
  const auto poly = quad::gauss_kronrod([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
  CHECK(poly.value == doctest::Approx(0.0).epsilon(1e-14));
  const auto root = quad::gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                        {1e-12, 0.0, 4000});
  CHECK(rel(root.value, 2.0) < 1e-10);
  const double bp[] = {0.5};
  const auto kink = quad::gauss_kronrod([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0, {}, bp);
  CHECK(rel(kink.value, 0.25) < 1e-14);
}

TEST_CASE("gamma_fn matches the high-precision table") {
  for (const auto& r : testing::kGammaRef) {
    INFO("x = " << r.x);
    CHECK(rel(gamma_fn(r.x), r.value) < 1e-13);
    CHECK(std::abs(log_gamma_fn(r.x) - std::log(r.value)) < 1e-13 * std::max(1.0, std::abs(std::log(r.value))));
  }
}

TEST_CASE("gamma_fn special values and recurrence") {
  CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-12);
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x = 0.05; x <= 20.0; x += 0.05) {
    INFO("x = " << x);
    CHECK(std::abs(gamma_fn(x + 1.0) - x * gamma_fn(x)) <= 1e-12 * gamma_fn(x + 1.0));
  }
}

TEST_CASE("gamma_fn agrees with the defining integral") {
  // Gamma(a) = (1/a) int_0^inf exp(-u^(1/a)) du after tau = u^(1/a).
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double a : {0.25, 0.5, 0.6, 0.75, 0.9, 1.3, 2.7}) {
    const double q = integrator.integrate([a](double u) { return std::exp(-std::pow(u, 1.0 / a)); }) / a;
    INFO("a = " << a);
    CHECK(rel(gamma_fn(a), q) < 1e-12);
  }
}

TEST_CASE("gamma_fn domain and range errors") {
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
  CHECK_THROWS_AS(gamma_fn(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(gamma_fn(172.0), OverflowError);
  CHECK(std::isfinite(log_gamma_fn(1e5)));
}

TEST_CASE("mittag_leffler matches the series oracle table") {
  for (const auto& r : testing::kMlRef) {
    INFO("beta = " << r.beta << ", z = " << r.z);
    const double r_abs = std::pow(std::abs(r.z), 1.0 / r.beta);
    if (r.z > 0.0 && r_abs > 700.0) {
      CHECK_THROWS_AS(mittag_leffler({r.beta, r.z}), OverflowError);
      CHECK(rel(log_mittag_leffler({r.beta, r.z}), std::log(r.value)) < 1e-12);
      continue;
    }
    CHECK(rel(mittag_leffler({r.beta, r.z}), r.value) < 1e-10);
    CHECK(std::abs(log_mittag_leffler({r.beta, r.z}) - std::log(r.value)) <
          1e-10 * std::max(1.0, std::abs(std::log(r.value))));
  }
}

TEST_CASE("mittag_leffler closed forms") {
  CHECK(mittag_leffler({0.5, 0.0}) == 1.0);
  CHECK(rel(mittag_leffler({1.0, 1.0}), std::numbers::e) < 1e-15);
  // E_{1/2}(z) = exp(z^2) erfc(-z); the closed form is independent of the series.
  CHECK(rel(mittag_leffler({0.5, 1.0}), std::exp(1.0) * std::erfc(-1.0)) < 1e-12);
  const double em2 = mittag_leffler({0.5, -2.0});
  CHECK(em2 > 0.0);
  CHECK(em2 < 1.0);
  CHECK(rel(em2, 0.25539567631050574387) < 1e-12);
  for (double z = -26.0; z <= 26.0; z += 0.25) {
    INFO("z = " << z);
    CHECK(std::abs(log_mittag_leffler({0.5, z}) - (z * z + std::log(std::erfc(-z)))) <
          1e-12 * std::max(1.0, z * z));
  }
  CHECK(rel(log_mittag_leffler({0.5, 30.0}), 900.69314718055994531) < 1e-14);
}

TEST_CASE("mittag_leffler reduces to exp at beta = 1") {
  for (double z = -10.0; z <= 10.0; z += 0.01) {
    INFO("z = " << z);
    CHECK(std::abs(mittag_leffler({1.0, z}) - std::exp(z)) <= 1e-10 * std::exp(z));
  }
}

TEST_CASE("mittag_leffler is strictly increasing in z") {
  for (double beta : {0.2, 0.5, 0.75, 0.95, 1.0}) {
    double prev = mittag_leffler({beta, -40.0});
    for (double z = -39.5; z <= 40.0; z += 0.5) {
      if (z > 0.0 && std::pow(z, 1.0 / beta) > 700.0) break;
      const double v = mittag_leffler({beta, z});
      INFO("beta = " << beta << ", z = " << z);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("mittag_leffler domain and overflow errors") {
  CHECK_THROWS_AS(mittag_leffler({0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(mittag_leffler({1.5, 1.0}), DomainError);
  CHECK_THROWS_AS(mittag_leffler({0.5, std::numeric_limits<double>::infinity()}), DomainError);
  CHECK_THROWS_AS(mittag_leffler({0.5, 30.0}), OverflowError);
  CHECK_THROWS_AS(mittag_leffler({1.0, 710.0}), OverflowError);
}

TEST_CASE("ml_weight examples") {
  CHECK(ml_weight(1.0, 0.75, 0.0) == 1.0);
  CHECK(rel(ml_weight(1.0, 0.75, 1.0), std::exp(1.0) * std::erfc(-1.0)) < 1e-12);
  CHECK(rel(ml_weight(2.0, 0.6, 0.5), 44430551.793444678429) < 1e-11);
  CHECK_THROWS_AS(ml_weight(0.0, 0.75, 1.0), DomainError);
  CHECK_THROWS_AS(ml_weight(1.0, 0.4, 1.0), DomainError);
  CHECK_THROWS_AS(ml_weight(1.0, 0.75, -1.0), DomainError);
}

TEST_CASE("renewal identity holds on the 24-case grid") {
  for (double alpha : {0.6, 0.75, 0.9})
    for (double g : {1.0, 5.0})
      for (double t : {0.25, 0.5, 1.0, 2.0}) {
        INFO("alpha = " << alpha << ", gamma = " << g << ", t = " << t);
        CHECK(renewal_residual(2.0 * alpha - 1.0, g, t) <= 1e-6);
      }
}

TEST_CASE("renewal identity against an independent tanh-sinh quadrature") {
  // Direct form 1 + g/Gamma(b) int_0^t (t - s)^(b-1) E_b(g s^b) ds, with the
  // endpoint singularity left to the double-exponential rule.
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double alpha : {0.6, 0.75, 0.9})
    for (double g : {1.0, 5.0})
      for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const double b = 2.0 * alpha - 1.0;
        if (std::pow(g * std::pow(t, b), 1.0 / b) > 600.0) continue;
        auto f = [&](double s, double tc) {
          const double tail = tc > 0.0 ? tc : t - s;
          return std::pow(tail, b - 1.0) * mittag_leffler({b, g * std::pow(s, b)});
        };
        const double integral = integrator.integrate(f, 0.0, t);
        const double lhs = mittag_leffler({b, g * std::pow(t, b)});
        const double rhs = 1.0 + g / gamma_fn(b) * integral;
        INFO("alpha = " << alpha << ", gamma = " << g << ", t = " << t);
        CHECK(rel(rhs, lhs) < 1e-8);
      }
}
