#pragma once

namespace fsde {

/// Argument of the one-parameter Mittag-Leffler function E_beta(z).
struct MlQuery {
  double beta = 1.0;  ///< in (0, 1]
  double z = 0.0;     ///< finite, either sign
};

/// Gamma function for positive arguments (Lanczos, g = 7).
/// Throws DomainError for x <= 0 or non-finite x, OverflowError past ~171.6.
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double log_gamma_fn(double x);

/// E_beta(z) = sum_k z^k / Gamma(beta k + 1).
///
/// Evaluation regimes, with r = |z|^(1/beta):
///  - power series with Neumaier summation when the terms cannot cancel
///    catastrophically (z > 0 and r <= 12, or z < 0 and r <= 3);
///  - for larger z > 0, the exact split into the exponential part
///    exp(r) / beta and a bounded correction integral;
///  - for larger z < 0, the Laplace-type representation of the completely
///    monotone function x -> E_beta(-x).
///
/// Throws DomainError for beta outside (0, 1] or non-finite z and
/// OverflowError when r > 700 on the positive axis.
double mittag_leffler(MlQuery q);

/// log E_beta(z). E_beta is positive on the real line for beta in (0, 1],
/// so this is defined everywhere and never overflows.
double log_mittag_leffler(MlQuery q);

/// E_{2 alpha - 1}(gamma_coef * t^(2 alpha - 1)), the weight of the
/// Bielecki-type norm. Equals 1 at t = 0.
double ml_weight(double gamma_coef, double alpha, double t);
double log_ml_weight(double gamma_coef, double alpha, double t);

/// Relative residual of the renewal identity
///   E_b(g t^b) = 1 + g / Gamma(b) * int_0^t (t - s)^(b - 1) E_b(g s^b) ds
/// evaluated in log-scaled form so that overflowing weights still work.
/// The integral is split at t/2 and each half is mapped to a smooth
/// integrand (s = v^(1/b) on the left, t - s = u^(1/b) on the right).
double renewal_residual(double beta, double gamma_coef, double t);

}  // namespace fsde
