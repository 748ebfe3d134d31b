#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

namespace sdlab {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;
using Index = Eigen::Index;

namespace detail {
struct FftPlans;
}

// Periodic box [-L, L)^n with N points per axis, row-major (last axis fastest).
class Grid {
 public:
  Grid(int n, double half_length, Index points_per_dim);

  int dim() const { return n_; }
  double half_length() const { return half_length_; }
  Index points_per_dim() const { return N_; }
  double dx() const { return dx_; }
  Index size() const { return size_; }
  double cell_measure() const { return cell_; }
  double box_measure() const;

  double coordinate(Index j) const { return -half_length_ + static_cast<double>(j) * dx_; }
  std::array<Index, 3> unravel(Index flat) const;
  Index ravel(const std::array<Index, 3>& idx) const;

  // Angular wavenumbers pi k / L per axis, FFT order.
  const RealArray& wavenumbers() const { return xi_; }
  // |xi|^2 per flat spectral index.
  const RealArray& wavenumber_squared() const { return xi2_; }

  // Unitary DFT pair: each direction scales by N^{-n/2}.
  ComplexArray forward(const ComplexArray& f) const;
  ComplexArray inverse(const ComplexArray& fhat) const;

  bool same_as(const Grid& other) const;

 private:
  int n_;
  double half_length_;
  Index N_;
  double dx_;
  Index size_;
  double cell_;
  RealArray xi_;
  RealArray xi2_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n, double half_length, Index points_per_dim);

// Immutable snapshot of a field on a grid; values must be finite.
template <typename Scalar>
class Field {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Field(GridPtr grid, Array values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("Field: null grid");
    if (values_.size() != grid_->size())
      throw std::invalid_argument("Field: value count " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_->size()));
    if (!values_.allFinite()) throw std::domain_error("Field: non-finite value");
  }

  static Field zeros(GridPtr grid) {
    const Index m = grid->size();
    return Field(std::move(grid), Array::Zero(m));
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Array& values() const { return values_; }
  Index size() const { return values_.size(); }

 private:
  GridPtr grid_;
  Array values_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

template <typename A, typename B>
void require_same_grid(const Field<A>& a, const Field<B>& b, const char* where) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_as(b.grid()))
    throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

// Sum of transform(f_j) times dx^n.
template <typename Scalar, typename Transform>
double lebesgue_integral(const Field<Scalar>& f, Transform&& transform) {
  double s = 0.0;
  const auto& v = f.values();
  for (Index j = 0; j < v.size(); ++j) s += static_cast<double>(transform(v[j]));
  return s * f.grid().cell_measure();
}

template <typename Scalar>
double mass(const Field<Scalar>& f) {
  return lebesgue_integral(f, [](const Scalar& z) { return std::norm(z); });
}

template <typename Scalar>
double l2_norm(const Field<Scalar>& f) {
  return std::sqrt(mass(f));
}

// int |grad u|^2 dx via sum |xi|^2 |u_hat|^2 dx^n.
double gradient_energy(const ComplexField& u);

ComplexField to_complex(const RealField& v);

}  // namespace sdlab
