#pragma once

#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/model_params.hpp"

namespace sdlab {

// Weights of the exponential integrator for mu v' + v = f on a cell of
// length h with f linear in time: v(h) = decay v(0) + w_start f(0) + w_end f(h).
struct ExpIntegratorWeights {
  double decay;
  double w_start;
  double w_end;
};

ExpIntegratorWeights debye_cell_weights(double h, double mu);

// |u|^p pointwise (no sign).
RealArray modulus_power(const ComplexArray& u, double p);

RealField debye_step(const RealField& v, const ComplexField& u_start, const ComplexField& u_end, double dt,
                     const ModelParams& params);

// Same step on raw arrays given precomputed |u|^p at both ends.
RealArray debye_step_array(const RealArray& v, const RealArray& f_start, const RealArray& f_end, double dt,
                           const ModelParams& params);

// Kernel weights for (1/mu) int_0^{t_j} e^{-(t_j - s)/mu} f(s) ds on a mesh,
// with f piecewise linear between nodes.
class DebyeKernelQuadrature {
 public:
  DebyeKernelQuadrature(std::vector<double> mesh, double mu);

  const std::vector<double>& mesh() const { return mesh_; }
  const ExpIntegratorWeights& cell(std::size_t k) const { return cells_.at(k - 1); }

  // Coefficient of f(t_k) in the quadrature for node j (k <= j).
  double node_weight(std::size_t j, std::size_t k) const;
  // Weighted sum for f = 1, times mu: equals mu (1 - e^{-t_j/mu}).
  double kernel_integral_of_one(std::size_t j) const;

  // e^{-t_j/mu} v0 + lambda sum_k node_weight(j, k) forcing[k].
  RealArray evaluate(const RealArray& v0, const std::vector<RealArray>& forcing, std::size_t j,
                     int lambda) const;

 private:
  std::vector<double> mesh_;
  double mu_;
  std::vector<ExpIntegratorWeights> cells_;
};

// Direct evaluation of e^{-t/mu} v0 + (lambda/mu) int_0^t e^{-(t-s)/mu}|u(s)|^p ds
// at mesh node j of the snapshot times.
RealField debye_mild_solution(const RealField& v0, const std::vector<ComplexField>& u_snaps,
                              const std::vector<double>& times, std::size_t j, const ModelParams& params);

// dv/dt = (lambda |u|^p - v) / mu.
RealField vt_field(const ComplexField& u, const RealField& v, const ModelParams& params);

}  // namespace sdlab
