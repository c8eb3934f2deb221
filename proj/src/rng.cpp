#include "cgal/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cgal {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& w : s_) w = sm.next();
}

Xoshiro256ss Xoshiro256ss::stream(std::uint64_t seed, std::uint64_t stream) {
  Xoshiro256ss g(seed);
  for (std::uint64_t i = 0; i < stream; ++i) g.jump();
  return g;
}

Xoshiro256ss::result_type Xoshiro256ss::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

void Xoshiro256ss::jump() {
  static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                            0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
  std::uint64_t t[4] = {0, 0, 0, 0};
  for (std::uint64_t word : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b)) {
        for (int i = 0; i < 4; ++i) t[i] ^= s_[i];
      }
      (*this)();
    }
  }
  for (int i = 0; i < 4; ++i) s_[i] = t[i];
}

double Xoshiro256ss::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Xoshiro256ss::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Xoshiro256ss::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Xoshiro256ss::below: bound must be positive");
  // Rejection on the largest multiple of bound.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t r = (*this)();
    if (r < limit) return r % bound;
  }
}

double Xoshiro256ss::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::vector<int> Xoshiro256ss::permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace cgal
