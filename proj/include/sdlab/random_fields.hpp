#pragma once

#include <cstdint>
#include <random>

#include "sdlab/grid.hpp"

namespace sdlab {

// Seeded test fields: a smooth-ish random background plus sparse spikes and
// exact ties, so rearrangement edge cases are exercised.
class RandomFieldSource {
 public:
  explicit RandomFieldSource(std::uint64_t seed) : rng_(seed) {}

  ComplexField complex_field(const GridPtr& grid);
  RealField real_field(const GridPtr& grid);
  RealField nonnegative_field(const GridPtr& grid);
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  double magnitude();
  std::mt19937_64 rng_;
};

}  // namespace sdlab
