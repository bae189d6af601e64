#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace debunkd {

// Purpose tags for deriving independent sub-streams from one master seed.
// Keeping draws segregated by purpose means, e.g., changing the tick length
// only affects posting draws and does not permute transition or intensity
// draws.
enum class Stream : std::uint64_t {
  Seeding = 1,
  Posting = 2,
  Transition = 3,
  Intensity = 4,
  Action = 5,
  PolicyInit = 6,
  DiscriminatorInit = 7,
  NegativeModelInit = 8,
  MemorySample = 9,
  Heuristic = 10,
  Terminal = 11,
  NetGrowth = 12,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derive a fresh master seed from a master seed and a salt (episode index,
// worker id, ...).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t salt) {
  return splitmix64(master ^ splitmix64(salt + 0x632be59bd9b4e019ull));
}

// Deterministic uniform generator. All distributions are derived from raw
// 64-bit draws so results do not depend on the standard library's
// distribution implementations.
class RngStream {
 public:
  RngStream() : RngStream(0, Stream::Seeding) {}
  RngStream(std::uint64_t master, Stream purpose)
      : gen_(splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(purpose)))) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Draw an index from a (possibly unnormalized-by-eps) probability vector.
  int categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double cum = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    if (last_positive < 0)
      throw std::invalid_argument("RngStream::categorical: no positive mass");
    return last_positive;
  }

  // k distinct values from [0, n), uniformly, via partial Fisher-Yates.
  std::vector<int> sample_distinct(int k, int n) {
    if (k < 0 || k > n)
      throw std::invalid_argument("RngStream::sample_distinct: k out of range");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace debunkd
