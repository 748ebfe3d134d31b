#pragma once

#include <string>

namespace sdlab {

// Parameters of i u_t + (1/2) Lap u = u v,  mu v_t + v = lambda |u|^p.
struct ModelParams {
  int n = 2;
  double p = 2.0;
  double mu = 1.0;
  int lambda = 1;
};

struct ScalingExponents {
  double alpha;
  double beta;
  double p0;
  double dispersive_exp;
  double h_max;
};

struct Admissibility {
  bool admissible;
  std::string reason;
};

// Throws std::invalid_argument when n, p, mu or lambda break the invariants.
void validate(const ModelParams& params);

ScalingExponents derive_exponents(const ModelParams& params);

// Positive root of n p^2 + (n - 2) p - 4 = 0.
double critical_power(int n);

Admissibility is_admissible(const ModelParams& params);

// int_0^1 (1 - s)^{-a} s^{-b} ds < infinity.
bool beta_integral_finite(double a, double b);

// Throws when h is outside [0, h_max).
void validate_weight_shift(const ModelParams& params, double h);

}  // namespace sdlab
