#pragma once

#include <array>
#include <cstdint>

namespace fsde::rng {

/// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection of a 128-bit
/// counter. Every draw is addressable by (key, counter), so streams need no
/// state and any evaluation order yields the same numbers.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  constexpr Counter operator()(Counter ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  Key key_;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Key of the stream for (master seed, stream index, domain tag).
constexpr std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t stream,
                                   std::uint64_t domain = 0) {
  return mix64(mix64(master_seed ^ mix64(domain)) ^ mix64(stream + 0x632BE59BD9B4E019ull));
}

/// Uniform in the open interval (0, 1): midpoints of a 2^-52 lattice. With
/// 53 bits the top midpoint 1 - 2^-54 would round to 1.
constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 20) ^ (std::uint64_t{lo} >> 12);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normal quantile, Wichura's AS 241 (PPND16), |rel err| ~ 1e-16.
double normal_quantile(double p);

/// Standard normal draw number `index` of stream `key`.
double standard_normal(std::uint64_t key, std::uint64_t index);

/// Uniform (0, 1) draw number `index` of stream `key`.
double uniform(std::uint64_t key, std::uint64_t index);

}  // namespace fsde::rng
