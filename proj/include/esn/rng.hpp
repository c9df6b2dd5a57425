#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace esn {

/// Seedable xoshiro256** generator. The 256-bit state is expanded from the
/// 64-bit seed with SplitMix64, so a seed fully determines the sequence.
///
/// Child streams are keyed by (seed, stream id) only; deriving one never
/// touches the parent's state, which lets a sweep hand every grid point its
/// own stream regardless of the order points are executed in.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  /// Raw 64-bit output.
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept;

  /// Uniform on [lo, hi). Throws InvalidRange unless lo < hi.
  double uniform(double lo, double hi);

  /// Standard normal via the Marsaglia polar method. Draws are produced in
  /// pairs; the second of each pair is cached and returned by the next call.
  double gaussian() noexcept;

  /// -1.0 or +1.0 with equal probability (top bit of one raw draw).
  double bernoulli_sign() noexcept;

  RandomSource derive(std::string_view stream_id) const noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

inline RandomSource new_source(std::uint64_t seed) noexcept { return RandomSource(seed); }

inline RandomSource derive_stream(const RandomSource& parent, std::string_view stream_id) noexcept {
  return parent.derive(stream_id);
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// FNV-1a over the bytes of `text`; used to key derived streams.
std::uint64_t hash_stream_id(std::string_view text) noexcept;

}  // namespace esn
