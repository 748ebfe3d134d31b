#include "sdlab/model_params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sdlab {

namespace {

std::string fmt_value(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void validate(const ModelParams& params) {
  if (params.n < 1 || params.n > 3)
    throw std::invalid_argument("model.n must be 1, 2 or 3");
  if (!(params.p > 1.0) || !std::isfinite(params.p))
    throw std::invalid_argument("model.p must be a finite real > 1");
  if (!(params.mu > 0.0) || !std::isfinite(params.mu))
    throw std::invalid_argument("model.mu must be a finite real > 0");
  if (params.lambda != 1 && params.lambda != -1)
    throw std::invalid_argument("model.lambda must be +1 or -1");
}

double critical_power(int n) {
  if (n < 1) throw std::invalid_argument("critical_power: n must be positive");
  const double b = n - 2.0;
  return (-b + std::sqrt(b * b + 16.0 * n)) / (2.0 * n);
}

ScalingExponents derive_exponents(const ModelParams& params) {
  if (!(params.p > 0.0)) throw std::invalid_argument("derive_exponents: p must be positive");
  if (params.n < 1) throw std::invalid_argument("derive_exponents: n must be positive");
  const double n = params.n;
  const double p = params.p;
  ScalingExponents e{};
  e.alpha = 1.0 / p - n / (2.0 * (p + 2.0));
  e.beta = p * e.alpha;
  e.p0 = critical_power(params.n);
  e.dispersive_exp = n * p / (2.0 * (p + 2.0));
  e.h_max = 1.0 - e.beta;
  return e;
}

Admissibility is_admissible(const ModelParams& params) {
  if (params.n < 1 || params.n > 3) return {false, "n must be 1, 2 or 3"};
  const double p0 = critical_power(params.n);
  const double lower = std::max(p0, 1.0);
  if (!(params.p > lower)) {
    if (p0 >= 1.0)
      return {false, "p <= p0 ~ " + fmt_value(p0)};
    return {false, "p <= 1"};
  }
  if (params.n > 2) {
    const double upper = 4.0 / (params.n - 2.0);
    if (!(params.p < upper)) return {false, "p >= 4/(n-2) = " + fmt_value(upper)};
  }
  return {true, "max(p0, 1) = " + fmt_value(lower) + " < p = " + fmt_value(params.p) +
                    (params.n > 2 ? " < 4/(n-2) = " + fmt_value(4.0 / (params.n - 2.0))
                                  : " < inf")};
}

bool beta_integral_finite(double a, double b) { return std::max(a, b) < 1.0; }

void validate_weight_shift(const ModelParams& params, double h) {
  const double h_max = derive_exponents(params).h_max;
  if (!(h >= 0.0) || !(h < h_max))
    throw std::invalid_argument("h = " + fmt_value(h) + " outside [0, h_max = " +
                                fmt_value(h_max) + ")");
}

}  // namespace sdlab
