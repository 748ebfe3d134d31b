#pragma once

#include <array>
#include <string>
#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/model_params.hpp"

namespace sdlab {

// Polynomial in x_1..x_n as a list of (coefficient, exponent multi-index).
struct Monomial {
  double coef;
  std::array<int, 3> exps;
};
using Polynomial = std::vector<Monomial>;

Polynomial laplacian(const Polynomial& poly, int n);
// Merges like terms and drops zero coefficients.
Polynomial simplify(const Polynomial& poly);
bool is_zero(const Polynomial& poly);
bool is_harmonic(const Polynomial& poly, int n);
double evaluate(const Polynomial& poly, const std::array<double, 3>& x);
int degree(const Polynomial& poly);

// Harmonic homogeneous polynomials of degree m <= 2 in n dimensions.
std::vector<Polynomial> harmonic_basis(int n, int m);
// All monomials of degree m.
std::vector<Polynomial> monomial_basis(int n, int m);

enum class DatumRole { u, v };

// eps Q_m(x - c) |x - c|^{-d - m} summed over centers, with d = 2/p for u
// and d = pn/(p+2) for v. Capped inside r_min, cosine taper on [r_out, L/2].
struct HomogeneousDatum {
  double amplitude = 0.0;
  int degree = 0;
  // Coefficients on harmonic_basis (u) or monomial_basis (v); empty = first basis element.
  std::vector<double> coefficients;
  std::vector<std::vector<double>> centers;  // empty = origin
  std::vector<double> weights;               // per center, default 1
  double r_min = 0.0;
  double r_out = 0.0;
  bool mollified = false;
};

// d in the profile |x|^{-d-m}: 2/p for u, pn/(p+2) for v.
double homogeneous_decay_exponent(DatumRole role, const ModelParams& params);
Polynomial datum_polynomial(const HomogeneousDatum& datum, DatumRole role, int n);

ComplexField make_u0_homogeneous(const HomogeneousDatum& datum, const GridPtr& grid, const ModelParams& params);
RealField make_v0_homogeneous(const HomogeneousDatum& datum, const GridPtr& grid, const ModelParams& params);

enum class SchwartzKind { gaussian, modulated_gaussian };

// amplitude exp(-|x - c|^2 / (2 width^2)) [exp(i xi0 . (x - c))].
ComplexField make_schwartz(SchwartzKind kind, double amplitude, double width, const std::vector<double>& center,
                           const GridPtr& grid, const std::vector<double>& wavevector = {});

enum class DataKind { zero, gaussian, modulated_gaussian, homogeneous };
const char* to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& s);

// Config-level description of one datum.
struct DataRecipe {
  DataKind kind = DataKind::zero;
  double amplitude = 0.0;
  double width = 1.0;
  std::vector<double> center;
  std::vector<double> wavevector;
  HomogeneousDatum homogeneous;  // amplitude taken from `amplitude`

  DataRecipe scaled(double factor) const;
};

ComplexField make_u0(const DataRecipe& recipe, const GridPtr& grid, const ModelParams& params);
RealField make_v0(const DataRecipe& recipe, const GridPtr& grid, const ModelParams& params);

// Minimum-image displacement x_j - c along one axis, in index arithmetic.
double periodic_displacement(const Grid& grid, Index j, double c);

}  // namespace sdlab
