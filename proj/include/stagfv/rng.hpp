#ifndef STAGFV_RNG_HPP
#define STAGFV_RNG_HPP

#include <cstdint>
#include <random>

namespace stagfv {

// Seeded stream of doubles in [0,1). mt19937_64 is fully specified by the
// standard, and the (x >> 11) * 2^-53 mapping avoids the library-dependent
// behaviour of uniform_real_distribution, so sequences are identical across
// platforms for a given seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

  std::uint64_t next_raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace stagfv

#endif
