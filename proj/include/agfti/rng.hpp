#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace agfti {

/// Counter-based 64-bit generator.
///
/// Output i (i = 1, 2, ...) is splitmix64_mix(key + i * 0x9E3779B97F4A7C15),
/// where splitmix64_mix is the SplitMix64 finalizer:
///
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     z =  z ^ (z >> 31)
///
/// Derived quantities are fixed so that other implementations can reproduce
/// masks and synthetic data bit for bit:
///   uniform01()       (next() >> 11) * 2^-53, in [0, 1)
///   uniform_index(n)  rejection sampling: draw x, reject while
///                     x < (2^64 - n) mod n, return x mod n
///   normal()          Box-Muller on u1 = 1 - uniform01(), u2 = uniform01(),
///                     returning sqrt(-2 ln u1) * cos(2 pi u2); one draw of
///                     two uniforms per call, no caching
///   shuffle(span)     Fisher-Yates from the back: for i = n-1 .. 1,
///                     swap(x[i], x[uniform_index(i + 1)])
///   derive(k, s)      key of an independent stream: mix(k ^ mix(s + 1))
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t derive(std::uint64_t key, std::uint64_t stream);

  std::uint64_t next();
  result_type operator()() { return next(); }

  double uniform01();
  std::uint64_t uniform_index(std::uint64_t n);
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace agfti
