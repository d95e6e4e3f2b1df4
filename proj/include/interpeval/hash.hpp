#ifndef INTERPEVAL_HASH_HPP_
#define INTERPEVAL_HASH_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace interpeval {

// Lowercase hex SHA-256 of `data`. Used for cache keys; stable across runs
// and platforms.
std::string sha256_hex(std::string_view data);

// FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view data);

// Combines a caller seed with text into one 64-bit state.
std::uint64_t hash64(std::uint64_t seed, std::string_view text);

// splitmix64 finalizer: bijective mixing of a 64-bit word. Feeding
// `state + i * kSplitmixGamma` for i = 0,1,2,... yields a counter-based
// pseudorandom stream that is identical on every platform.
std::uint64_t splitmix64(std::uint64_t x);

inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

// Maps a 64-bit word to a double in [0, 1) using the top 53 bits.
double unit_double(std::uint64_t word);

// Counter-based uniform stream over [0, 1).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  double next_unit() { return unit_double(splitmix64(state_ += kSplitmixGamma)); }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  std::uint64_t next_word() { return splitmix64(state_ += kSplitmixGamma); }

 private:
  std::uint64_t state_;
};

}  // namespace interpeval

#endif  // INTERPEVAL_HASH_HPP_
