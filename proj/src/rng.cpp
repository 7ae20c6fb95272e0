#include "matchlab/rng.hpp"

namespace matchlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id)
    : key_(splitmix64(splitmix64(seed) ^ (stream_id * 0xA3EC4E93C5A1F0D7ULL + 1))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + counter_++ * 0x9E3779B97F4A7C15ULL); }

std::uint64_t CounterRng::bounded(std::uint64_t n) {
  // Rejection below the largest multiple of n; unbiased and portable.
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double CounterRng::next_unit_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace matchlab
