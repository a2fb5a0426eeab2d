#ifndef HYLEAR_RNG_HPP_
#define HYLEAR_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace hylear {

// Deterministic splitmix64 generator. Kept self-contained so streams are
// reproducible across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  // Standard normal via Box-Muller (no cached spare; one draw per call).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

  // Derives an independent stream; used to give workers per-task seeds.
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x5851f42d4c957f2dULL * (stream + 1)));
    return r.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace hylear

#endif  // HYLEAR_RNG_HPP_
