#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace coarsekit {

/// Deterministic 64-bit generator (splitmix64). All derived draws are defined
/// here rather than via std::uniform_*_distribution, whose outputs are
/// implementation-defined; reports produced from a fixed seed must be
/// byte-stable across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n), unbiased via rejection. n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_below: n must be positive");
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_below(n)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double in_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  long long int_in(long long lo, long long hi) {
    if (hi < lo) throw std::invalid_argument("Rng::int_in: empty range");
    return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) { return next_unit() < p; }

  /// Independent stream derived from the current state and a label. Forking
  /// does not advance this generator, so sibling streams are reproducible no
  /// matter the order they are consumed in.
  Rng fork(std::string_view label) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    Rng child(state_ ^ h ^ 0x9E3779B97F4A7C15ULL);
    child.next_u64();
    return child;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    if (v.empty()) throw std::invalid_argument("Rng::pick: empty vector");
    return v[index(v.size())];
  }

private:
  std::uint64_t state_;
};

}  // namespace coarsekit
