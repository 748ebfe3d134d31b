#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/model_params.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/trajectory.hpp"

namespace sdlab {

// t_j = T (j/J)^gamma, j = 0..J.
std::vector<double> graded_mesh(double horizon, int cells, double grading = 2.0);

enum class FirstCellRule { power_law, trapezoid };
enum class WeakMetric { quasi, full };

const char* to_string(FirstCellRule rule);
const char* to_string(WeakMetric metric);

// S(t_j) u0 - i int_0^{t_j} S(t_j - s) (u v)(s) ds on the mesh. Interior
// cells use the trapezoid rule; the first cell uses the chosen rule.
std::vector<ComplexField> apply_phi1(const std::vector<ComplexField>& u_traj, const std::vector<RealField>& v_traj,
                                     const ComplexField& u0, const std::vector<double>& mesh,
                                     const ModelParams& params, FirstCellRule rule = FirstCellRule::power_law);

// e^{-t_j/mu} v0 + (lambda/mu) int_0^{t_j} e^{-(t_j-s)/mu} |u(s)|^p ds.
std::vector<RealField> apply_phi2(const std::vector<ComplexField>& u_traj, const RealField& v0,
                                  const std::vector<double>& mesh, const ModelParams& params);

struct PicardOptions {
  int max_iters = 40;
  double tol = 1e-10;
  WeakMetric metric = WeakMetric::quasi;
  FirstCellRule first_cell = FirstCellRule::power_law;
  int non_contraction_run = 3;
  int workers = 1;
};

// One Picard step m: iterate m has radii U_m, V_m; the step produces
// iterate m + 1 at distance d_m.
struct IterationRecord {
  int m = 0;
  double distance = 0.0;
  double distance_u = 0.0;
  double distance_v = 0.0;
  double ratio = 0.0;  // d_m / d_{m-1}; NaN when undefined
  // sup_j t^alpha ||u_m||, sup_j t^beta ||v_m|| in the full weak norm.
  double U = 0.0;
  double V = 0.0;
  double U_quasi = 0.0;
  double V_quasi = 0.0;
  double U_strong = 0.0;
  double V_strong = 0.0;
  // Radii of iterate m + 1.
  double U_next = 0.0;
  double V_next = 0.0;
  double U_next_strong = 0.0;
  double V_next_strong = 0.0;
  // sup_j t^alpha ||u_{m+1} - S u0||, sup_j t^beta ||v_{m+1} - e^{-t/mu} v0||.
  double N1 = 0.0;
  double N2 = 0.0;
  double N1_strong = 0.0;
  double N2_strong = 0.0;
  double K1 = 0.0;  // NaN when U V = 0
  double K2 = 0.0;  // NaN when U = 0
  double K1_strong = 0.0;
  double K2_strong = 0.0;
};

struct ContractionDiagnostics {
  std::vector<IterationRecord> iterations;
  // sup_j t^alpha ||S(t_j) u0||*_(p+2,inf) and ||v0||*_((p+2)/p,inf).
  double data_norm_u = 0.0;
  double data_norm_v = 0.0;

  std::vector<double> ratios() const;
  double max_ratio() const;
};

enum class PicardStatus { converged, max_iterations, non_contraction, diverged };
const char* to_string(PicardStatus status);

struct PicardResult {
  Trajectory trajectory;
  ContractionDiagnostics diagnostics;
  PicardStatus status = PicardStatus::max_iterations;
  std::string message;
};

PicardResult picard_iterate(const ComplexField& u0, const RealField& v0, const std::vector<double>& mesh,
                            const ModelParams& params, const PicardOptions& options = {});

struct RecurrenceReport {
  bool applicable = false;
  double K1 = 0.0;
  double K2 = 0.0;
  // max over m of U_{m+1} / (U_1 + K1 U_m V_m), V_{m+1} / (V_1 + K2 U_m^p).
  double max_residual_u = 0.0;
  double max_residual_v = 0.0;
  double K1_strong = 0.0;
  double K2_strong = 0.0;
  double max_residual_u_strong = 0.0;
  double max_residual_v_strong = 0.0;
  bool holds = true;
  bool holds_strong = true;
};

RecurrenceReport recurrence_tracker(const ContractionDiagnostics& diagnostics, const ModelParams& params,
                                    double slack = 0.05);

// max_j [ ||u|^p - |w|^p| - p |u - w| (|u|^{p-1} + |w|^{p-1}) ]; <= 0 when the bound holds.
double lipschitz_violation(const ComplexField& u, const ComplexField& w, double p);

}  // namespace sdlab
