#include "sdlab/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "sdlab/lorentz.hpp"

namespace sdlab {

Propagator::Propagator(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("Propagator: null grid");
  half_xi2_ = 0.5 * grid_->wavenumber_squared();
}

ComplexArray Propagator::multiplier(double t) const {
  const RealArray phase = -t * half_xi2_;
  return phase.cos().cast<Complex>() + Complex(0.0, 1.0) * phase.sin().cast<Complex>();
}

ComplexArray Propagator::apply_spectral(const ComplexArray& uhat, double t) const {
  if (t == 0.0) return uhat;
  return uhat * multiplier(t);
}

ComplexArray Propagator::propagate(const ComplexArray& u, double t) const {
  if (t == 0.0) return u;
  return grid_->inverse(apply_spectral(grid_->forward(u), t));
}

ComplexField Propagator::propagate(const ComplexField& u, double t) const {
  if (!u.grid().same_as(*grid_)) throw std::invalid_argument("propagate: grid mismatch");
  return ComplexField(u.grid_ptr(), propagate(u.values(), t));
}

GroupLawCheck group_laws_check(const Propagator& prop, const ComplexField& u, double t1, double t2) {
  GroupLawCheck c{0.0, 0.0, 0.0, true};
  const double norm_u = l2_norm(u);
  if (norm_u == 0.0) return c;
  const Grid& g = u.grid();
  auto l2 = [&](const ComplexArray& a) { return std::sqrt(a.abs2().sum() * g.cell_measure()); };
  const ComplexArray s1 = prop.propagate(u.values(), t1);
  const ComplexArray s12 = prop.propagate(s1, t2);
  const ComplexArray s_sum = prop.propagate(u.values(), t1 + t2);
  const ComplexArray back = prop.propagate(s1, -t1);
  c.composition_error = l2(s12 - s_sum) / norm_u;
  c.unitarity_error = std::abs(l2(s1) - norm_u) / norm_u;
  c.inverse_error = l2(back - u.values()) / norm_u;
  c.passed = c.composition_error < 1e-10 && c.unitarity_error < 1e-12 && c.inverse_error < 1e-10;
  return c;
}

DispersiveProbe dispersive_probe(const Propagator& prop, const ComplexField& phi, const ModelParams& params,
                                 const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("dispersive_probe: empty time list");
  const ScalingExponents e = derive_exponents(params);
  const double r_hi = params.p + 2.0;
  const double r_lo = (params.p + 2.0) / (params.p + 1.0);
  const double strong0 = strong_norm(phi, r_lo);
  const double weak0 = weak_norm(phi, r_lo);
  const ComplexArray phihat = prop.grid().forward(phi.values());
  DispersiveProbe probe;
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("dispersive_probe: times must be positive");
    const ComplexArray st = prop.grid().inverse(prop.apply_spectral(phihat, t));
    const double s = strong_norm(st, prop.grid().cell_measure(), r_hi);
    const double w = weak_norm(st, prop.grid().cell_measure(), r_hi);
    const double weight = std::pow(t, e.dispersive_exp);
    probe.times.push_back(t);
    probe.norms.push_back(s);
    probe.weighted_value.push_back(weight * s);
    probe.strong_ratio.push_back(strong0 > 0.0 ? weight * s / strong0 : 0.0);
    probe.weak_ratio.push_back(weak0 > 0.0 ? weight * w / weak0 : 0.0);
    probe.fitted_constant = std::max(probe.fitted_constant, probe.strong_ratio.back());
    probe.fitted_weak_constant = std::max(probe.fitted_weak_constant, probe.weak_ratio.back());
  }
  return probe;
}

}  // namespace sdlab
