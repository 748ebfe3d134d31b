#include "sdlab/debye.hpp"

#include <cmath>
#include <stdexcept>

namespace sdlab {

ExpIntegratorWeights debye_cell_weights(double h, double mu) {
  if (!(h > 0.0)) throw std::invalid_argument("debye step: dt must be > 0");
  const double x = h / mu;
  ExpIntegratorWeights w{};
  w.decay = std::exp(-x);
  if (x < 0.1) {
    // w_end = sum_{k>=1} (-1)^{k+1} x^k/(k+1)!, w_start = sum_{k>=1} (-1)^{k+1} k x^k/(k+1)!.
    double term = 1.0;  // x^k / (k+1)!
    double we = 0.0;
    double ws = 0.0;
    for (int k = 1; k <= 12; ++k) {
      term *= x / static_cast<double>(k + 1);
      const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
      we += sgn * term;
      ws += sgn * k * term;
    }
    w.w_start = ws;
    w.w_end = we;
  } else {
    const double phi1 = -std::expm1(-x) / x;
    w.w_start = phi1 - w.decay;
    w.w_end = 1.0 - phi1;
  }
  return w;
}

RealArray modulus_power(const ComplexArray& u, double p) {
  if (p == 2.0) return u.abs2();
  return u.abs().pow(p);
}

RealArray debye_step_array(const RealArray& v, const RealArray& f_start, const RealArray& f_end, double dt,
                           const ModelParams& params) {
  const ExpIntegratorWeights w = debye_cell_weights(dt, params.mu);
  const double lam = params.lambda;
  return w.decay * v + lam * (w.w_start * f_start + w.w_end * f_end);
}

RealField debye_step(const RealField& v, const ComplexField& u_start, const ComplexField& u_end, double dt,
                     const ModelParams& params) {
  require_same_grid(v, u_start, "debye_step");
  require_same_grid(v, u_end, "debye_step");
  return RealField(v.grid_ptr(),
                   debye_step_array(v.values(), modulus_power(u_start.values(), params.p),
                                    modulus_power(u_end.values(), params.p), dt, params));
}

DebyeKernelQuadrature::DebyeKernelQuadrature(std::vector<double> mesh, double mu)
    : mesh_(std::move(mesh)), mu_(mu) {
  if (mesh_.empty() || mesh_.front() != 0.0) throw std::invalid_argument("kernel quadrature: mesh must start at 0");
  for (std::size_t k = 1; k < mesh_.size(); ++k) {
    if (!(mesh_[k] > mesh_[k - 1])) throw std::invalid_argument("kernel quadrature: mesh must increase");
    cells_.push_back(debye_cell_weights(mesh_[k] - mesh_[k - 1], mu_));
  }
}

double DebyeKernelQuadrature::node_weight(std::size_t j, std::size_t k) const {
  if (j >= mesh_.size() || k > j) throw std::out_of_range("node_weight");
  double w = 0.0;
  // Cell c = [t_{c-1}, t_c] contributes w_end to node c and w_start to node c-1.
  if (k >= 1) w += std::exp(-(mesh_[j] - mesh_[k]) / mu_) * cells_[k - 1].w_end;
  if (k + 1 <= j) w += std::exp(-(mesh_[j] - mesh_[k + 1]) / mu_) * cells_[k].w_start;
  return w;
}

double DebyeKernelQuadrature::kernel_integral_of_one(std::size_t j) const {
  double s = 0.0;
  for (std::size_t k = 0; k <= j; ++k) s += node_weight(j, k);
  return mu_ * s;
}

RealArray DebyeKernelQuadrature::evaluate(const RealArray& v0, const std::vector<RealArray>& forcing,
                                          std::size_t j, int lambda) const {
  if (j >= mesh_.size()) throw std::out_of_range("kernel quadrature: node outside mesh");
  if (forcing.size() < j + 1) throw std::invalid_argument("kernel quadrature: missing forcing snapshots");
  RealArray out = std::exp(-mesh_[j] / mu_) * v0;
  if (j == 0) return out;
  RealArray acc = RealArray::Zero(v0.size());
  for (std::size_t k = 0; k <= j; ++k) acc += node_weight(j, k) * forcing[k];
  out += static_cast<double>(lambda) * acc;
  return out;
}

RealField debye_mild_solution(const RealField& v0, const std::vector<ComplexField>& u_snaps,
                              const std::vector<double>& times, std::size_t j, const ModelParams& params) {
  if (j >= times.size()) throw std::out_of_range("debye_mild_solution: t outside mesh");
  if (u_snaps.size() != times.size()) throw std::invalid_argument("debye_mild_solution: snapshot count mismatch");
  const DebyeKernelQuadrature quad(times, params.mu);
  std::vector<RealArray> forcing;
  forcing.reserve(j + 1);
  for (std::size_t k = 0; k <= j; ++k) {
    require_same_grid(v0, u_snaps[k], "debye_mild_solution");
    forcing.push_back(modulus_power(u_snaps[k].values(), params.p));
  }
  return RealField(v0.grid_ptr(), quad.evaluate(v0.values(), forcing, j, params.lambda));
}

RealField vt_field(const ComplexField& u, const RealField& v, const ModelParams& params) {
  require_same_grid(u, v, "vt_field");
  return RealField(v.grid_ptr(),
                   (params.lambda * modulus_power(u.values(), params.p) - v.values()) / params.mu);
}

}  // namespace sdlab
