#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/initial_data.hpp"
#include "sdlab/model_params.hpp"
#include "sdlab/trajectory.hpp"

namespace sdlab {

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;  // log value at log t = 0
  double r2 = 0.0;
  double target_exponent = 0.0;
  double relative_error = 0.0;  // |slope - target| / |target|

  bool spans_decade() const { return t_hi >= 10.0 * t_lo; }
};

// Least squares of log value against log t.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values, double target_exponent);

std::vector<double> log_spaced(double lo, double hi, int count);

// Radius in frequency space holding a fraction `quantile` of the spectral mass.
double spectral_radius(const ComplexField& u, double quantile);
// (L/2) / (xi_q t): how many times the box half-width exceeds the distance
// travelled by the dominant frequencies.
double no_wrap_margin(const ComplexField& u0, double t, double quantile);

enum class NormKind { quasi, strong };
const char* to_string(NormKind k);

struct DecayOptions {
  double horizon = 64.0;
  double dt = 0.1;
  int samples = 24;
  double t_start = 0.5;
  double fit_t_min = 0.5;
  double margin_min = 1.5;
  double caveat_margin = 2.0;
  double spectral_quantile = 0.5;
  NormKind norm = NormKind::quasi;
  bool coupling = true;
  double tolerance = 0.10;
  double min_r2 = 0.98;
};

enum class DecayVerdict { pass, fail, trend_pass, trend_fail, degenerate_pass };
const char* to_string(DecayVerdict v);
inline bool is_pass(DecayVerdict v) {
  return v == DecayVerdict::pass || v == DecayVerdict::trend_pass || v == DecayVerdict::degenerate_pass;
}

struct DecaySample {
  double t;
  double margin;
  double u_quasi, u_full, u_strong;
  double v_quasi, v_full, v_strong;
  double mass;
};

struct DecayExperiment {
  ScalingExponents exponents{};
  std::vector<DecaySample> samples;
  std::optional<DecayFit> fit_u;
  std::optional<DecayFit> fit_v;
  std::size_t window_begin = 0;  // sample indices of the fit window
  std::size_t window_end = 0;
  bool downgraded = false;
  DecayVerdict verdict = DecayVerdict::fail;
  std::string detail;
  std::string caveat;
};

DecayExperiment theorem1_decay_experiment(const DataRecipe& u_recipe, const DataRecipe& v_recipe, const GridPtr& grid,
                                          const ModelParams& params, const DecayOptions& options);

struct StabilityOptions {
  double horizon = 32.0;
  double dt = 0.1;
  int samples = 16;
  double t_ref = 1.0;
  NormKind norm = NormKind::quasi;
  double vanish_factor = 0.1;
  double persist_fraction = 0.5;
  int workers = 1;
};

enum class StabilityVerdict { vanishing, persistent, mixed };
const char* to_string(StabilityVerdict v);

struct StabilityReport {
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> diff_u;    // t^{alpha+h} ||u - u~||
  std::vector<double> diff_v;    // t^{beta+h} ||v - v~||
  std::vector<double> combined;  // max of the two
  std::vector<double> linear;    // t^{alpha+h} ||S(t)(u0 - u~0)||
  StabilityVerdict verdict = StabilityVerdict::mixed;
  std::string detail;
};

// Verdict from the series: VANISHING when combined and linear both drop by
// vanish_factor from t_ref to the horizon, PERSISTENT when both stay above
// persist_fraction of their t_ref value, MIXED otherwise.
StabilityVerdict classify_stability(const std::vector<double>& combined, const std::vector<double>& linear,
                                    double vanish_factor, double persist_fraction, std::string* detail = nullptr);

// The perturbed datum is base + perturbation.
StabilityReport stability_experiment(const DataRecipe& base_u, const DataRecipe& base_v, const DataRecipe& pert_u,
                                     const DataRecipe& pert_v, double h, const GridPtr& grid,
                                     const ModelParams& params, const StabilityOptions& options);

struct ConservationReport {
  std::vector<double> times;
  std::vector<double> mass;
  double max_relative_drift = 0.0;
  bool has_pseudo_hamiltonian = false;
  std::vector<double> ph_times;
  std::vector<double> ph_residual;
  double max_ph_residual = 0.0;
};

ConservationReport conservation_report(const Trajectory& traj, const ModelParams& params);

}  // namespace sdlab
