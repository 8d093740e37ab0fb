#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace acn {

struct RngState {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  bool operator==(const RngState&) const = default;
};

/// Counter-based generator: the i-th output is a SplitMix64 finalizer applied
/// to (key, i). Streams are split by hashing a stream id into a fresh key, so
/// children are independent of how far the parent has advanced.
///
/// Satisfies UniformRandomBitGenerator. Normal draws use Box-Muller without a
/// cached second value, so the full state is (key, counter).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);
  explicit Rng(RngState state) : key_(state.key), counter_(state.counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform in [0, n); unbiased. n must be positive.
  std::size_t uniform_index(std::size_t n);
  double normal();
  double normal(double mean, double stddev);
  bool bernoulli(double p) { return uniform() < p; }

  /// Independent child stream. Does not advance this generator.
  Rng split(std::uint64_t stream) const;
  /// Child stream keyed by several ids, e.g. (generation, lineage).
  Rng split(std::uint64_t a, std::uint64_t b) const { return split(a).split(b); }

  RngState state() const { return {key_, counter_}; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace acn
