#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace erd {

// Deterministic random stream. mt19937_64 output is fixed by the standard,
// and the float conversions below are explicit, so a given seed produces
// bit-identical values on every platform (std::normal_distribution and
// friends make no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal();

  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stateless mix for deriving per-task seeds from (base seed, index)
// without correlating the streams. splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

}  // namespace erd
