#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fsde {

/// Uniform grid t_k = T k / n on [0, T].
class TimeGrid {
 public:
  TimeGrid() = default;

  double horizon() const noexcept { return horizon_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t n_nodes() const noexcept { return n_steps_ + 1; }
  double step() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
  /// t_0 = 0 and t_{n_steps} = T exactly.
  double node(std::size_t k) const noexcept {
    return horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
  }
  std::vector<double> nodes() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  friend TimeGrid make_grid(double horizon, std::size_t n_steps);
  double horizon_ = 1.0;
  std::size_t n_steps_ = 1;
};

/// Throws DomainError unless T > 0 (finite) and n_steps >= 1.
TimeGrid make_grid(double horizon, std::size_t n_steps);

/// Scalar Brownian increments dW_k ~ N(0, h) for n_paths independent paths.
///
/// Increment (j, k) is a pure function of (master_seed, j, k): path j uses
/// the Philox stream keyed by mix(master_seed, j) and step k is its counter.
/// An ensemble is therefore either generated on demand or backed by stored
/// increments (after materialize() or a load); both read the same values.
class BrownianEnsemble {
 public:
  BrownianEnsemble(TimeGrid grid, std::size_t n_paths, std::uint64_t master_seed);

  /// Wraps replayed increments, row-major [path][step].
  static BrownianEnsemble from_increments(TimeGrid grid, std::size_t n_paths,
                                          std::uint64_t master_seed,
                                          std::vector<double> increments);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  bool is_materialized() const noexcept { return !stored_.empty(); }

  double increment(std::size_t path, std::size_t step) const;
  /// Writes the n_steps increments of `path` into `out`.
  void path_increments(std::size_t path, std::span<double> out) const;

  /// Same ensemble with every increment stored (OpenMP over paths).
  BrownianEnsemble materialize() const;
  /// Row-major copy of all increments.
  std::vector<double> increments() const;

 private:
  TimeGrid grid_;
  std::size_t n_paths_;
  std::uint64_t master_seed_;
  double sqrt_step_;
  std::vector<double> stored_;
};

/// Counter-based ensemble for (grid, n_paths, master_seed); bit-identical
/// for identical arguments.
BrownianEnsemble sample_ensemble(const TimeGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed);

namespace reference {
/// Sequential generation of all increments, row-major; kept as the oracle
/// for the parallel and on-demand paths.
std::vector<double> brownian_increments(const TimeGrid& grid, std::size_t n_paths,
                                        std::uint64_t master_seed);
}  // namespace reference

/// CSV replay format: `# fsde-brownian v1` line, a `# horizon=..,n_steps=..,
/// n_paths=..,master_seed=..` line, then one row of 17-digit increments per path.
void write_brownian_csv(const BrownianEnsemble& ensemble, const std::filesystem::path& file);
BrownianEnsemble read_brownian_csv(const std::filesystem::path& file);

/// Binary replay format (little-endian host order): magic "FSDEBRW1",
/// f64 horizon, u64 n_steps, u64 n_paths, u64 master_seed, f64 increments.
void write_brownian_binary(const BrownianEnsemble& ensemble, const std::filesystem::path& file);
BrownianEnsemble read_brownian_binary(const std::filesystem::path& file);

}  // namespace fsde
