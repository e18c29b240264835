#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mischart {

// 64-bit FNV-1a over bytes. Used wherever a run-stable hash of identifying
// strings is needed (instance seeds, stratum keys); std::hash makes no
// stability promises.
constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr std::uint64_t fnv1a64_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic generator with identical output on every platform and
// stdlib. std::mt19937_64 itself is portable but the <random>
// distributions wrapping it are not, and reproducibility of generated
// corpora is a hard contract here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // splitmix64 step
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // uniform double in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool chance(double p) { return unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // Independent substream for a named purpose; keeps e.g. style sampling
  // insensitive to how many draws injection consumed.
  Rng fork(std::string_view tag) const {
    return Rng(fnv1a64(tag, state_ ^ 0x6a09e667f3bcc909ull));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mischart
