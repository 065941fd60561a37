#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ccga {

/// splitmix64 finalizer chained over the inputs. Used to derive independent
/// per-trial seeds from (master seed, indices).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// Seeded source of randomness.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All derived draws (bounded integers, uniform reals) are computed
/// here rather than through std::*_distribution, whose algorithms differ
/// between standard libraries. Same seed, same draws, on every platform.
///
/// Single owner; never share one stream between threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
  /// so the result is exactly uniform. `bound` must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// An independent stream keyed by `index`; does not advance this stream.
  RandomStream derive(std::uint64_t index) const {
    return RandomStream(mix_seed({seed_, index}));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace ccga
