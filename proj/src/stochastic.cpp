#include "fsde/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/philox.hpp"

namespace fsde {
namespace rng {

double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double uniform(std::uint64_t key, std::uint64_t index) {
  const auto block = Philox4x32(key)({static_cast<std::uint32_t>(index),
                                      static_cast<std::uint32_t>(index >> 32), 0u, 0u});
  return to_open_unit(block[0], block[1]);
}

double standard_normal(std::uint64_t key, std::uint64_t index) {
  return normal_quantile(uniform(key, index));
}

}  // namespace rng

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(n_nodes());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
  return out;
}

TimeGrid make_grid(double horizon, std::size_t n_steps) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw DomainError("grid horizon T must be positive, got " + std::to_string(horizon));
  }
  if (n_steps < 1) throw DomainError("grid needs at least one step");
  TimeGrid grid;
  grid.horizon_ = horizon;
  grid.n_steps_ = n_steps;
  return grid;
}

BrownianEnsemble::BrownianEnsemble(TimeGrid grid, std::size_t n_paths, std::uint64_t master_seed)
    : grid_(grid), n_paths_(n_paths), master_seed_(master_seed), sqrt_step_(std::sqrt(grid.step())) {
  if (n_paths < 1) throw DomainError("ensemble needs at least one path");
}

BrownianEnsemble BrownianEnsemble::from_increments(TimeGrid grid, std::size_t n_paths,
                                                   std::uint64_t master_seed,
                                                   std::vector<double> increments) {
  BrownianEnsemble e(grid, n_paths, master_seed);
  if (increments.size() != n_paths * grid.n_steps()) {
    throw GridMismatchError("increment count " + std::to_string(increments.size()) +
                            " does not match n_paths * n_steps");
  }
  e.stored_ = std::move(increments);
  return e;
}

double BrownianEnsemble::increment(std::size_t path, std::size_t step) const {
  if (!stored_.empty()) return stored_[path * grid_.n_steps() + step];
  return sqrt_step_ * rng::standard_normal(rng::stream_key(master_seed_, path), step);
}

void BrownianEnsemble::path_increments(std::size_t path, std::span<double> out) const {
  const std::size_t n = grid_.n_steps();
  if (out.size() != n) throw GridMismatchError("increment buffer size differs from n_steps");
  if (!stored_.empty()) {
    const double* row = stored_.data() + path * n;
    std::copy(row, row + n, out.begin());
    return;
  }
  const std::uint64_t key = rng::stream_key(master_seed_, path);
  for (std::size_t k = 0; k < n; ++k) out[k] = sqrt_step_ * rng::standard_normal(key, k);
}

BrownianEnsemble BrownianEnsemble::materialize() const {
  if (is_materialized()) return *this;
  const std::size_t n = grid_.n_steps();
  std::vector<double> data(n_paths_ * n);
  const auto paths = static_cast<std::int64_t>(n_paths_);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < paths; ++j) {
    path_increments(static_cast<std::size_t>(j),
                    std::span<double>(data.data() + static_cast<std::size_t>(j) * n, n));
  }
  return from_increments(grid_, n_paths_, master_seed_, std::move(data));
}

std::vector<double> BrownianEnsemble::increments() const {
  if (is_materialized()) return stored_;
  return materialize().stored_;
}

BrownianEnsemble sample_ensemble(const TimeGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed) {
  return BrownianEnsemble(grid, n_paths, master_seed);
}

namespace reference {

std::vector<double> brownian_increments(const TimeGrid& grid, std::size_t n_paths,
                                        std::uint64_t master_seed) {
  const double scale = std::sqrt(grid.step());
  std::vector<double> out;
  out.reserve(n_paths * grid.n_steps());
  for (std::size_t j = 0; j < n_paths; ++j) {
    const std::uint64_t key = rng::stream_key(master_seed, j);
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
      out.push_back(scale * rng::standard_normal(key, k));
    }
  }
  return out;
}

}  // namespace reference
}  // namespace fsde
