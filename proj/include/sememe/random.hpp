#ifndef SEMEME_RANDOM_HPP
#define SEMEME_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sememe {

// Seeded generator with distribution helpers whose output does not depend on
// the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Number of failures before the next success of a Bernoulli(p) trial.
  std::uint64_t geometric_gap(double p) {
    if (p >= 1.0) return 0;
    const double u = 1.0 - uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / std::log1p(-p));
    return gap >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(gap);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace sememe

#endif  // SEMEME_RANDOM_HPP
