#include "fsde/specfun.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include "fsde/errors.hpp"
#include "fsde/quadrature.hpp"

namespace fsde {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Lanczos sum A(z) for Gamma(z + 1), z >= -1/2.
double lanczos_sum(double z) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return a;
}

void require_positive_finite(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(x));
  }
}

// Series cut-offs in terms of r = |z|^(1/beta). Above these the terms are
// too large (cancellation on the negative axis) or too many.
constexpr double kSeriesMaxPositive = 12.0;
constexpr double kSeriesMaxNegative = 3.0;
constexpr double kOverflowExponent = 700.0;
constexpr int kSeriesMaxTerms = 500;

// value = mantissa * exp(log_scale)
struct Scaled {
  double mantissa;
  double log_scale;
};

void validate(const MlQuery& q) {
  if (!(q.beta > 0.0 && q.beta <= 1.0)) {
    throw DomainError("Mittag-Leffler parameter beta must lie in (0, 1], got " +
                      std::to_string(q.beta));
  }
  if (!std::isfinite(q.z)) throw DomainError("Mittag-Leffler argument must be finite");
}

double ml_series(double beta, double z) {
  const double log_abs = std::log(std::abs(z));
  const bool negative = z < 0.0;
  double sum = 1.0;
  double carry = 0.0;
  int quiet = 0;
  for (int k = 1; k < kSeriesMaxTerms; ++k) {
    double term = std::exp(k * log_abs - log_gamma_fn(beta * k + 1.0));
    if (negative && (k % 2 == 1)) term = -term;
    // Neumaier compensated addition.
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
    if (std::abs(term) < 1e-16 * std::abs(sum + carry)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  return sum + carry;
}

// int_0^inf exp(-r s^(1/beta)) / (s^2 - 2 s c + 1) ds with c = +cos(beta pi)
// on the positive axis and c = -cos(beta pi) on the negative axis.
double ml_laplace_integral(double beta, double r, double c) {
  const double inv_beta = 1.0 / beta;
  auto integrand = [=](double s) {
    if (s == 0.0) return 1.0;
    return std::exp(-r * std::pow(s, inv_beta)) / (s * (s - 2.0 * c) + 1.0);
  };
  const double upper = std::pow(745.0 / r, beta);
  std::vector<double> cuts;
  for (double level : {1.0, 10.0, 40.0}) cuts.push_back(std::pow(level / r, beta));
  if (c > 0.0) cuts.push_back(c);  // denominator minimum
  quad::Tolerance tol;
  tol.relative = 1e-13;
  return quad::gauss_kronrod(integrand, 0.0, upper, tol, cuts).value;
}

Scaled evaluate(const MlQuery& q) {
  validate(q);
  const double beta = q.beta;
  const double z = q.z;
  if (z == 0.0) return {1.0, 0.0};
  if (beta == 1.0) return {1.0, z};

  const double r = std::pow(std::abs(z), 1.0 / beta);
  const double theta = std::numbers::pi * beta;
  const double weight = std::sin(theta) / theta;
  if (z > 0.0) {
    if (r <= kSeriesMaxPositive) return {ml_series(beta, z), 0.0};
    const double correction = weight * ml_laplace_integral(beta, r, std::cos(theta));
    return {1.0 / beta - correction * std::exp(-r), r};
  }
  if (r <= kSeriesMaxNegative) return {ml_series(beta, z), 0.0};
  return {weight * ml_laplace_integral(beta, r, -std::cos(theta)), 0.0};
}

}  // namespace

double gamma_fn(double x) {
  require_positive_finite(x, "gamma_fn argument");
  if (x < 0.5) return gamma_fn(x + 1.0) / x;
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  // Split the power so that t^(z + 1/2) does not overflow before exp(-t).
  const double half_power = std::pow(t, 0.5 * (z + 0.5));
  const double value =
      std::sqrt(2.0 * std::numbers::pi) * lanczos_sum(z) * (half_power * std::exp(-t)) * half_power;
  if (!std::isfinite(value)) throw OverflowError("gamma_fn overflow at x = " + std::to_string(x));
  return value;
}

double log_gamma_fn(double x) {
  require_positive_finite(x, "log_gamma_fn argument");
  if (x < 0.5) return log_gamma_fn(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double mittag_leffler(MlQuery q) {
  const Scaled s = evaluate(q);
  if (s.log_scale > kOverflowExponent ||
      (q.z > 0.0 && std::pow(q.z, 1.0 / q.beta) > kOverflowExponent)) {
    throw OverflowError("E_beta(z) exceeds the double range (beta = " + std::to_string(q.beta) +
                        ", z = " + std::to_string(q.z) + ")");
  }
  return s.log_scale == 0.0 ? s.mantissa : s.mantissa * std::exp(s.log_scale);
}

double log_mittag_leffler(MlQuery q) {
  const Scaled s = evaluate(q);
  return std::log(s.mantissa) + s.log_scale;
}

namespace {
MlQuery weight_query(double gamma_coef, double alpha, double t) {
  require_positive_finite(gamma_coef, "weight coefficient gamma");
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw DomainError("order alpha must lie in (1/2, 1), got " + std::to_string(alpha));
  }
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be non-negative");
  const double beta = 2.0 * alpha - 1.0;
  return {beta, gamma_coef * std::pow(t, beta)};
}
}  // namespace

double ml_weight(double gamma_coef, double alpha, double t) {
  return mittag_leffler(weight_query(gamma_coef, alpha, t));
}

double log_ml_weight(double gamma_coef, double alpha, double t) {
  return log_mittag_leffler(weight_query(gamma_coef, alpha, t));
}

double renewal_residual(double beta, double gamma_coef, double t) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  require_positive_finite(gamma_coef, "gamma");
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be non-negative");
  if (t == 0.0) return 0.0;

  const double inv_beta = 1.0 / beta;
  auto log_e = [=](double s) { return log_mittag_leffler({beta, gamma_coef * std::pow(s, beta)}); };
  const double log_lhs = log_e(t);
  const double v_max = std::pow(0.5 * t, beta);

  quad::Tolerance tol;
  tol.relative = 1e-12;

  // Left half, s = v^(1/beta): E_b(g s^b) = E_b(g v) is analytic in v.
  auto left = [&](double v) {
    const double s = std::pow(v, inv_beta);
    const double e = std::exp(log_mittag_leffler({beta, gamma_coef * v}) - log_lhs);
    return std::pow(t - s, beta - 1.0) * e * std::pow(v, inv_beta - 1.0) * inv_beta;
  };
  // Right half, t - s = u^(1/beta): the kernel singularity is absorbed.
  auto right = [&](double u) {
    const double s = t - std::pow(u, inv_beta);
    return std::exp(log_e(s) - log_lhs) * inv_beta;
  };
  // The scaled integrand decays like exp(-g^(1/b) (t - s)); seed the
  // partition at its natural length scales.
  std::vector<double> cuts;
  const double rate = std::pow(gamma_coef, inv_beta);
  for (double level : {1.0, 10.0, 40.0}) cuts.push_back(std::pow(level / rate, beta));

  const double integral = quad::gauss_kronrod(left, 0.0, v_max, tol).value +
                          quad::gauss_kronrod(right, 0.0, v_max, tol, cuts).value;
  const double rhs = std::exp(-log_lhs) + gamma_coef / gamma_fn(beta) * integral;
  return std::abs(1.0 - rhs);
}

}  // namespace fsde
