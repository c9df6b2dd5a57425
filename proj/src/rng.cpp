#include "esn/rng.hpp"

#include <cmath>
#include <sstream>

#include "esn/error.hpp"

namespace esn {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_stream_id(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomSource::RandomSource(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t RandomSource::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomSource::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "uniform requires lo < hi, got [" << lo << ", " << hi << ")";
    throw Error(ErrorKind::InvalidRange, msg.str());
  }
  const double value = lo + (hi - lo) * next_unit();
  // lo + (hi-lo)*u can round up to hi when u is close to 1.
  return value < hi ? value : std::nextafter(hi, lo);
}

double RandomSource::gaussian() noexcept {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
  do {
    a = 2.0 * next_unit() - 1.0;
    b = 2.0 * next_unit() - 1.0;
    s = a * a + b * b;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  cached_gaussian_ = b * scale;
  has_cached_gaussian_ = true;
  return a * scale;
}

double RandomSource::bernoulli_sign() noexcept {
  return (next_u64() >> 63) != 0 ? 1.0 : -1.0;
}

RandomSource RandomSource::derive(std::string_view stream_id) const noexcept {
  std::uint64_t mix = seed_ ^ rotl(hash_stream_id(stream_id), 17);
  const std::uint64_t child_seed = splitmix64(mix) ^ hash_stream_id(stream_id);
  return RandomSource(child_seed);
}

}  // namespace esn
