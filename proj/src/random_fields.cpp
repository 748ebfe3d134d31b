#include "sdlab/random_fields.hpp"

#include <cmath>

namespace sdlab {

double RandomFieldSource::magnitude() {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pick = u(rng_);
  if (pick < 0.05) return 10.0 * u(rng_) + 1.0;  // spike
  if (pick < 0.15) return 0.5;                    // tie
  if (pick < 0.25) return 0.0;
  return u(rng_);
}

ComplexField RandomFieldSource::complex_field(const GridPtr& grid) {
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  ComplexArray v(grid->size());
  for (Index j = 0; j < v.size(); ++j) v[j] = std::polar(magnitude(), ph(rng_));
  return ComplexField(grid, std::move(v));
}

RealField RandomFieldSource::real_field(const GridPtr& grid) {
  std::bernoulli_distribution sign(0.5);
  RealArray v(grid->size());
  for (Index j = 0; j < v.size(); ++j) v[j] = sign(rng_) ? magnitude() : -magnitude();
  return RealField(grid, std::move(v));
}

RealField RandomFieldSource::nonnegative_field(const GridPtr& grid) {
  RealArray v(grid->size());
  for (Index j = 0; j < v.size(); ++j) v[j] = magnitude();
  return RealField(grid, std::move(v));
}

}  // namespace sdlab
