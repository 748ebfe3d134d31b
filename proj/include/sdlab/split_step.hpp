#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/model_params.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/trajectory.hpp"

namespace sdlab {

struct StepperConfig {
  double dt = 0.01;
  double horizon = 1.0;
  // Snapshot every `stride` steps (the final time is always emitted).
  int stride = 1;
  // Extra output times; steps are shortened to land on them exactly.
  std::vector<double> output_times;
  // When false, u evolves freely and v relaxes with zero forcing.
  bool coupling = true;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double last_finite_time, const std::string& what)
      : std::runtime_error(what), last_finite_time_(last_finite_time) {}
  double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

std::pair<ComplexField, RealField> strang_step(const Propagator& prop, const ComplexField& u, const RealField& v,
                                               double dt, const ModelParams& params, bool coupling = true);
std::pair<ComplexField, RealField> strang_step(const ComplexField& u, const RealField& v, double dt,
                                               const ModelParams& params);

using SnapshotObserver = std::function<void(double t, const ComplexField& u, const RealField& v)>;

// Marches from t = 0, calling observer at t = 0 and every output time.
void march(const ComplexField& u0, const RealField& v0, const StepperConfig& config, const ModelParams& params,
           const SnapshotObserver& observer);

Trajectory simulate(const ComplexField& u0, const RealField& v0, const StepperConfig& config,
                    const ModelParams& params);

struct PseudoHamiltonianSeries {
  std::vector<double> times;     // interior snapshot times
  std::vector<double> energy;    // E at every snapshot
  std::vector<double> dE_dt;     // centered differences
  std::vector<double> rhs;       // 2 lambda mu int |v_t|^2
  std::vector<double> residual;
  double max_residual = 0.0;
};

// E = int |grad u|^2 + lambda |u|^4 - lambda mu^2 |v_t|^2.
double pseudo_energy(const ComplexField& u, const RealField& v, const ModelParams& params);

PseudoHamiltonianSeries pseudo_hamiltonian_check(const Trajectory& traj, const ModelParams& params,
                                                 double floor = 1e-300);

}  // namespace sdlab
