#pragma once

#include <functional>
#include <span>

namespace fsde::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

struct Tolerance {
  double relative = 1e-13;
  double absolute = 0.0;
  int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
/// `breakpoints` (inside (a, b), any order) seed the initial partition.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     Tolerance tol = {}, std::span<const double> breakpoints = {});

}  // namespace fsde::quad
