#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sdlab/grid.hpp"

namespace sdlab {

// Decreasing rearrangement of a grid step function: the k-th largest |f|
// occupies the measure interval [(k-1) a, k a), a = dx^n.
struct Rearrangement {
  std::vector<double> values;
  double cell = 1.0;

  double measure_total() const { return cell * static_cast<double>(values.size()); }
  double cumulative_measure(std::size_t k) const { return cell * static_cast<double>(k); }
  // f*(tau).
  double operator()(double tau) const;
  // lambda_{f*}(t) = a * #{k : f_(k) > t}.
  double distribution(double t) const;
};

template <typename Derived>
Rearrangement decreasing_rearrangement(const Eigen::ArrayBase<Derived>& f, double cell) {
  Rearrangement r;
  r.cell = cell;
  const auto mags = f.derived().abs().eval();
  r.values.assign(mags.data(), mags.data() + mags.size());
  std::sort(r.values.begin(), r.values.end(), std::greater<double>());
  return r;
}

template <typename Scalar>
Rearrangement decreasing_rearrangement(const Field<Scalar>& f) {
  return decreasing_rearrangement(f.values(), f.grid().cell_measure());
}

// lambda_f(t) = a * #{j : |f_j| > t}.
template <typename Derived>
double distribution_function(const Eigen::ArrayBase<Derived>& f, double cell, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("distribution_function: t must be >= 0");
  return cell * static_cast<double>((f.derived().abs() > t).count());
}

template <typename Scalar>
double distribution_function(const Field<Scalar>& f, double t) {
  return distribution_function(f.values(), f.grid().cell_measure(), t);
}

struct WeakNorms {
  double quasi;
  double full;
};

// quasi = max_k f_(k) (k a)^{1/r};  full = sup_t t^{1/r} f**(t).
WeakNorms weak_norms(const Rearrangement& rearr, double r);

inline double weak_quasi_norm(const Rearrangement& rearr, double r) { return weak_norms(rearr, r).quasi; }
inline double weak_norm(const Rearrangement& rearr, double r) { return weak_norms(rearr, r).full; }

template <typename Derived>
double weak_quasi_norm(const Eigen::ArrayBase<Derived>& f, double cell, double r) {
  return weak_quasi_norm(decreasing_rearrangement(f, cell), r);
}
template <typename Derived>
double weak_norm(const Eigen::ArrayBase<Derived>& f, double cell, double r) {
  return weak_norm(decreasing_rearrangement(f, cell), r);
}
template <typename Scalar>
double weak_quasi_norm(const Field<Scalar>& f, double r) {
  return weak_quasi_norm(f.values(), f.grid().cell_measure(), r);
}
template <typename Scalar>
double weak_norm(const Field<Scalar>& f, double r) {
  return weak_norm(f.values(), f.grid().cell_measure(), r);
}
template <typename Scalar>
WeakNorms weak_norms(const Field<Scalar>& f, double r) {
  return weak_norms(decreasing_rearrangement(f), r);
}

// (sum |f|^r a)^{1/r}; r = infinity gives max |f|.
template <typename Derived>
double strong_norm(const Eigen::ArrayBase<Derived>& f, double cell, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("strong_norm: r must be >= 1");
  if (f.size() == 0) return 0.0;
  const auto mags = f.derived().abs().eval();
  if (std::isinf(r)) return mags.maxCoeff();
  if (r == 2.0) return std::sqrt(mags.square().sum() * cell);
  if (r == 1.0) return mags.sum() * cell;
  return std::pow(mags.pow(r).sum() * cell, 1.0 / r);
}

template <typename Scalar>
double strong_norm(const Field<Scalar>& f, double r) {
  return strong_norm(f.values(), f.grid().cell_measure(), r);
}

struct WeakNormReport {
  double r = 0.0;
  double quasi_norm = 0.0;
  double full_norm = 0.0;
  double strong_norm = 0.0;
  // |quasi(N) - quasi(N/2)| / quasi(N), from the every-other-point subgrid.
  double truncation_sensitivity = 0.0;
  Rearrangement rearrangement;
};

WeakNormReport weak_norm_report(const ComplexField& f, double r, bool keep_rearrangement = false);
WeakNormReport weak_norm_report(const RealField& f, double r, bool keep_rearrangement = false);

struct HolderVerdict {
  double lhs;
  double rhs;
  bool holds;
};

// ||f g||_(r,inf) <= r/(r-1) ||f||_(r1,inf) ||g||_(r2,inf),  1/r = 1/r1 + 1/r2.
template <typename DF, typename DG>
HolderVerdict holder_check(const Eigen::ArrayBase<DF>& f, const Eigen::ArrayBase<DG>& g, double cell,
                           double r1, double r2) {
  if (!(r1 > 1.0) || !(r2 > 1.0) || std::isinf(r1) || std::isinf(r2))
    throw std::invalid_argument("holder_check: need 1 < r1, r2 < inf");
  const double r = 1.0 / (1.0 / r1 + 1.0 / r2);
  if (!(r > 1.0)) throw std::invalid_argument("holder_check: 1/r1 + 1/r2 must be < 1");
  if (f.size() != g.size()) throw std::invalid_argument("holder_check: size mismatch");
  const auto fg = (f.derived().abs() * g.derived().abs()).eval();
  HolderVerdict v{};
  v.lhs = weak_norm(fg, cell, r);
  v.rhs = r / (r - 1.0) * weak_norm(f, cell, r1) * weak_norm(g, cell, r2);
  v.holds = v.lhs <= v.rhs * (1.0 + 1e-12);
  return v;
}

template <typename SF, typename SG>
HolderVerdict holder_check(const Field<SF>& f, const Field<SG>& g, double r1, double r2) {
  require_same_grid(f, g, "holder_check");
  return holder_check(f.values(), g.values(), f.grid().cell_measure(), r1, r2);
}

}  // namespace sdlab
