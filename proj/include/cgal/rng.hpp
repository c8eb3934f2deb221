#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace cgal {

/// SplitMix64, used to expand a single 64-bit seed into xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** with the reference jump polynomial. Models
/// UniformRandomBitGenerator, but the samplers below avoid the
/// implementation-defined std:: distributions so that streams are
/// bit-identical on every platform.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed);

  /// Child stream `stream` of `seed`: the seeded generator advanced by
  /// `stream` jumps of 2^128 draws.
  static Xoshiro256ss stream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  void jump();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method (no cached spare).
  double normal();

  /// Uniformly random permutation of {0, ..., n - 1} (Fisher-Yates).
  std::vector<int> permutation(int n);

 private:
  std::uint64_t s_[4];
};

/// Named child streams used by the instance generators.
enum class Stream : std::uint64_t {
  kEigenvalues = 0,
  kOrthogonal = 1,
  kLinearTerms = 2,
  kVertices = 3,
  kGeometry = 4,
  kSampling = 5,
};

inline Xoshiro256ss make_stream(std::uint64_t seed, Stream s) {
  return Xoshiro256ss::stream(seed, static_cast<std::uint64_t>(s));
}

}  // namespace cgal
