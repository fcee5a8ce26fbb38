#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oosinfer {

/// splitmix64 finalizer; used both as a standalone mixer and to expand a
/// master seed into independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combine of a seed word into a running state.
inline std::uint64_t seed_combine(std::uint64_t state, std::uint64_t word) {
  return splitmix64(state ^ (word + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2)));
}

/// Deterministic substream seed for one Monte Carlo replication. Streams
/// are keyed by (master seed, dgp id, T, pi index, rep index) so that the
/// draws of replication r never depend on how many replications run or on
/// which worker executes them.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t dgp_id,
                                    std::uint64_t T, std::uint64_t pi_index,
                                    std::uint64_t rep) {
  std::uint64_t s = splitmix64(master);
  s = seed_combine(s, dgp_id);
  s = seed_combine(s, T);
  s = seed_combine(s, pi_index);
  s = seed_combine(s, rep);
  return s;
}

/// Seeded random stream. Wraps mt19937_64 with explicit uniform and
/// Box-Muller normal draws so the consumption pattern is fixed by this
/// class alone, not by the standard library's distribution objects.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0,1); never returns exactly 0 or 1.
  double uniform() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the trigonometric Box-Muller transform.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Integer in [0, n); used for shuffles.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Fisher-Yates shuffle with draws from this stream.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace oosinfer
