#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace matchlab {

// Counter-based deterministic generator: output i of a stream is
// splitmix64(key + i * GAMMA), so streams can be split per work unit and
// consumed in any order without changing results. The algorithm name is
// recorded in simulation sidecar files so runs stay auditable.
inline constexpr const char* kRngName = "splitmix64-counter";

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Unbiased value in [0, n), n >= 1. Rejection sampling on the top bits;
  // never uses std::uniform_int_distribution (implementation-defined).
  std::uint64_t bounded(std::uint64_t n);

  double next_unit_double();  // [0, 1)

  // Fisher-Yates. Uniform over all permutations of the span.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace matchlab
