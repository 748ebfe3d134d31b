#include "sdlab/split_step.hpp"

#include <cmath>
#include <cstdio>

#include "sdlab/debye.hpp"

namespace sdlab {

namespace {

struct State {
  ComplexArray u;
  RealArray v;
};

// Potential phase with the Debye update: v_mid from a half step, u phase by
// v_mid over h, then v over the full step using |u| before and after.
void potential_step(State& s, double h, const ModelParams& params, bool coupling) {
  const RealArray f0 = coupling ? modulus_power(s.u, params.p) : RealArray::Zero(s.v.size());
  // |u| is unchanged by the phase step, so f at both ends is f0.
  const RealArray v_mid = debye_step_array(s.v, f0, f0, 0.5 * h, params);
  if (coupling) {
    const RealArray phase = -h * v_mid;
    s.u *= phase.cos().cast<Complex>() + Complex(0.0, 1.0) * phase.sin().cast<Complex>();
  }
  s.v = debye_step_array(s.v, f0, f0, h, params);
}

std::string fmt_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

}  // namespace

std::pair<ComplexField, RealField> strang_step(const Propagator& prop, const ComplexField& u, const RealField& v,
                                               double dt, const ModelParams& params, bool coupling) {
  if (!(dt > 0.0)) throw std::invalid_argument("strang_step: dt must be > 0");
  require_same_grid(u, v, "strang_step");
  State s{prop.propagate(u.values(), 0.5 * dt), v.values()};
  potential_step(s, dt, params, coupling);
  s.u = prop.propagate(s.u, 0.5 * dt);
  return {ComplexField(u.grid_ptr(), std::move(s.u)), RealField(v.grid_ptr(), std::move(s.v))};
}

std::pair<ComplexField, RealField> strang_step(const ComplexField& u, const RealField& v, double dt,
                                               const ModelParams& params) {
  const Propagator prop(u.grid_ptr());
  return strang_step(prop, u, v, dt, params, true);
}

void march(const ComplexField& u0, const RealField& v0, const StepperConfig& config, const ModelParams& params,
           const SnapshotObserver& observer) {
  validate(params);
  require_same_grid(u0, v0, "simulate");
  if (!(config.dt > 0.0)) throw std::invalid_argument("stepper: dt must be > 0");
  if (!(config.horizon >= config.dt)) throw std::invalid_argument("stepper: horizon must be >= dt");
  if (config.stride < 1) throw std::invalid_argument("stepper: stride must be >= 1");

  // Step schedule: uniform dt, shortened to hit requested output times.
  std::vector<double> targets = config.output_times;
  for (double t : targets)
    if (!(t > 0.0) || t > config.horizon) throw std::invalid_argument("stepper: output time outside (0, horizon]");
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  struct Step {
    double h;
    bool emit;
  };
  std::vector<Step> steps;
  {
    const double eps = 1e-12 * config.horizon;
    double t = 0.0;
    std::size_t next_target = 0;
    long count = 0;
    while (t < config.horizon - eps) {
      double end = t + config.dt;
      bool hit = false;
      if (next_target < targets.size() && targets[next_target] <= end + eps) {
        end = targets[next_target++];
        hit = true;
      }
      if (end >= config.horizon - eps) end = config.horizon;
      ++count;
      const bool emit = hit || end == config.horizon || (targets.empty() && count % config.stride == 0);
      steps.push_back({end - t, emit});
      t = end;
    }
  }

  const Propagator prop(u0.grid_ptr());
  const Grid& g = u0.grid();
  if (observer) observer(0.0, u0, v0);

  State s{u0.values(), v0.values()};
  double t = 0.0;
  double last_finite = 0.0;
  ComplexArray uhat = g.forward(s.u);
  s.u = g.inverse(prop.apply_spectral(uhat, 0.5 * steps.front().h));
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double h = steps[k].h;
    potential_step(s, h, params, config.coupling);
    t += h;
    if (k + 1 == steps.size()) t = config.horizon;
    const bool emit = steps[k].emit || k + 1 == steps.size();
    if (emit) {
      s.u = prop.propagate(s.u, 0.5 * h);
      if (!s.u.allFinite() || !s.v.allFinite())
        throw BlowUpError(last_finite, "non-finite state at t = " + fmt_time(t) + " (last finite t = " +
                                           fmt_time(last_finite) + ")");
      last_finite = t;
      if (observer) observer(t, ComplexField(u0.grid_ptr(), s.u), RealField(v0.grid_ptr(), s.v));
      if (k + 1 < steps.size()) s.u = prop.propagate(s.u, 0.5 * steps[k + 1].h);
    } else {
      s.u = prop.propagate(s.u, 0.5 * (h + steps[k + 1].h));
      if (!s.v.allFinite())
        throw BlowUpError(last_finite, "non-finite state at t = " + fmt_time(t) + " (last finite t = " +
                                           fmt_time(last_finite) + ")");
    }
  }
}

Trajectory simulate(const ComplexField& u0, const RealField& v0, const StepperConfig& config,
                    const ModelParams& params) {
  Trajectory traj;
  march(u0, v0, config, params, [&](double t, const ComplexField& u, const RealField& v) {
    traj.times.push_back(t);
    traj.u.push_back(u);
    traj.v.push_back(v);
  });
  return traj;
}

double pseudo_energy(const ComplexField& u, const RealField& v, const ModelParams& params) {
  const RealField vt = vt_field(u, v, params);
  const double lam = params.lambda;
  const double cell = u.grid().cell_measure();
  return gradient_energy(u) + lam * u.values().abs2().square().sum() * cell -
         lam * params.mu * params.mu * vt.values().square().sum() * cell;
}

PseudoHamiltonianSeries pseudo_hamiltonian_check(const Trajectory& traj, const ModelParams& params, double floor) {
  if (params.p != 2.0) throw std::invalid_argument("pseudo_hamiltonian_check: requires p = 2");
  traj.check();
  if (traj.size() < 3) throw std::invalid_argument("pseudo_hamiltonian_check: need >= 3 snapshots");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t k = 1; k < traj.size(); ++k)
    if (std::abs((traj.times[k] - traj.times[k - 1]) - h) > 1e-9 * h)
      throw std::invalid_argument("pseudo_hamiltonian_check: snapshots must be uniformly spaced");
  PseudoHamiltonianSeries s;
  for (std::size_t k = 0; k < traj.size(); ++k) s.energy.push_back(pseudo_energy(traj.u[k], traj.v[k], params));
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double dE = (s.energy[k + 1] - s.energy[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]);
    const RealField vt = vt_field(traj.u[k], traj.v[k], params);
    const double rhs =
        2.0 * params.lambda * params.mu * vt.values().square().sum() * traj.u[k].grid().cell_measure();
    const double r = std::abs(dE - rhs) / (std::abs(dE) + std::abs(rhs) + floor);
    s.times.push_back(traj.times[k]);
    s.dE_dt.push_back(dE);
    s.rhs.push_back(rhs);
    s.residual.push_back(r);
    s.max_residual = std::max(s.max_residual, r);
  }
  return s;
}

}  // namespace sdlab
