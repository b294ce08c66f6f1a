#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ttn/dense_tensor.hpp"

namespace ttn {

// Deterministic random source: mt19937_64 seeded directly; uniform doubles
// take the top 53 bits, Gaussians come from a hand-rolled Box-Muller pair.
// Identical seeds give identical streams on every platform (the std
// distribution objects are deliberately avoided).
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do { u = uniform01(); } while (u <= 0.0);
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  cx gaussian_cx() { return cx{gaussian(), gaussian()}; }

  // integer in [0, bound)
  uint64_t below(uint64_t bound) { return engine_() % bound; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

DenseTensor random_tensor(const std::vector<long>& shape, RandomSource& rng);

// Haar-random unitary of size n (QR of a Gaussian matrix with phase fix).
DenseTensor random_unitary(long n, RandomSource& rng);

// random complex unit vector of length n
std::vector<cx> random_unit_vector(long n, RandomSource& rng);

}  // namespace ttn
