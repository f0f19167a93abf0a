#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace cachenet {

// Seedable RNG with platform-independent output. std::mt19937_64 emits a
// sequence fixed by the standard; the standard *distributions* are not
// portable, so the draw helpers below are hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n) by rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Integer in [lo, hi], inclusive.
  long uniform_int(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Real in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // k distinct values from {0, ..., n-1}, in random order.
  std::vector<long> sample_distinct(long k, long n) {
    if (k > n) throw std::invalid_argument("Rng::sample_distinct: k > n");
    std::vector<long> pool(n);
    for (long i = 0; i < n; ++i) pool[i] = i;
    for (long i = 0; i < k; ++i) {
      const long j = i + static_cast<long>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent stream for a sub-task, derived from this stream's state.
  Rng fork(std::uint64_t salt) {
    return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cachenet
