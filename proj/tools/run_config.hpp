#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdlab/diagnostics.hpp"
#include "sdlab/initial_data.hpp"
#include "sdlab/model_params.hpp"
#include "sdlab/picard.hpp"

namespace sdlab::cli {

using FlatConfig = std::map<std::string, std::string>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverKind { picard, splitstep, both };

struct RunConfig {
  ModelParams model;
  double half_length = 32.0;
  long points = 256;

  DataRecipe u0;
  DataRecipe v0;
  DataRecipe perturbation_u;
  DataRecipe perturbation_v;

  SolverKind solver = SolverKind::splitstep;
  double horizon = 4.0;
  double dt = 0.01;
  int stride = 10;
  bool coupling = true;
  int mesh_cells = 64;
  double mesh_grading = 2.0;
  int max_iters = 40;
  double tol = 1e-10;
  FirstCellRule first_cell = FirstCellRule::power_law;
  WeakMetric metric = WeakMetric::quasi;

  double h = 0.0;
  int samples = 24;
  double t_start = 0.5;
  double fit_t_min = 0.5;
  double margin_min = 1.5;
  double caveat_margin = 2.0;
  double spectral_quantile = 0.5;
  NormKind norm = NormKind::quasi;
  double t_ref = 1.0;
  double vanish_factor = 0.1;
  double persist_fraction = 0.5;
  double tolerance = 0.10;
  double min_r2 = 0.98;
  std::vector<double> norm_times;

  std::vector<double> sweep_amplitudes;

  std::uint64_t seed = 1;
  int invariant_fields = 100;
  int invariant_steps = 20;

  FlatConfig raw;
};

// Reads INI (section/key = value) or JSON (object of objects) into
// "section.key" -> value strings.
FlatConfig read_flat_config(const std::string& path);
FlatConfig parse_ini(const std::string& text);
FlatConfig parse_json(const std::string& text);

// Typed view with field-level error messages; unknown keys are rejected.
RunConfig config_from_flat(const FlatConfig& flat);
RunConfig load_config(const std::string& path);

// Canonical INI echo of the effective configuration.
std::string echo_ini(const RunConfig& cfg);

// Cross-field checks for a command; returns error messages (empty = ok).
std::vector<std::string> cross_validate(const RunConfig& cfg, const std::string& command);
// Non-fatal findings, e.g. a small no-wrap margin.
std::vector<std::string> config_warnings(const RunConfig& cfg);

const char* to_string(SolverKind k);

}  // namespace sdlab::cli
