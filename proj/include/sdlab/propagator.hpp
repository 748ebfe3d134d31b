#pragma once

#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/model_params.hpp"

namespace sdlab {

// Free Schrodinger group S(t) = exp(i t Lap / 2) as a Fourier multiplier.
class Propagator {
 public:
  explicit Propagator(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  // |xi|^2 / 2 per spectral index.
  const RealArray& half_xi2() const { return half_xi2_; }

  ComplexArray multiplier(double t) const;
  // Multiplies a spectral array by exp(-i |xi|^2 t / 2).
  ComplexArray apply_spectral(const ComplexArray& uhat, double t) const;
  ComplexArray propagate(const ComplexArray& u, double t) const;
  ComplexField propagate(const ComplexField& u, double t) const;

 private:
  GridPtr grid_;
  RealArray half_xi2_;
};

struct GroupLawCheck {
  double composition_error;  // ||S(t1)S(t2)u - S(t1+t2)u|| / ||u||
  double unitarity_error;    // | ||S(t1)u|| - ||u|| | / ||u||
  double inverse_error;      // ||S(-t1)S(t1)u - u|| / ||u||
  bool passed;
};

GroupLawCheck group_laws_check(const Propagator& prop, const ComplexField& u, double t1, double t2);

struct DispersiveProbe {
  std::vector<double> times;
  std::vector<double> norms;           // ||S(t)phi||_{p+2}
  std::vector<double> strong_ratio;    // t^d ||S(t)phi||_{p+2} / ||phi||_{(p+2)/(p+1)}
  std::vector<double> weak_ratio;      // t^d ||S(t)phi||_(p+2,inf) / ||phi||_((p+2)/(p+1),inf)
  std::vector<double> weighted_value;  // t^d ||S(t)phi||_{p+2}
  double fitted_constant = 0.0;        // max strong_ratio
  double fitted_weak_constant = 0.0;   // max weak_ratio
};

DispersiveProbe dispersive_probe(const Propagator& prop, const ComplexField& phi, const ModelParams& params,
                                 const std::vector<double>& times);

}  // namespace sdlab
