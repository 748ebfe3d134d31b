#include "sdlab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sdlab {

Polynomial simplify(const Polynomial& poly) {
  std::map<std::array<int, 3>, double> acc;
  for (const auto& t : poly) acc[t.exps] += t.coef;
  Polynomial out;
  for (const auto& [e, c] : acc)
    if (c != 0.0) out.push_back({c, e});
  return out;
}

bool is_zero(const Polynomial& poly) { return simplify(poly).empty(); }

Polynomial laplacian(const Polynomial& poly, int n) {
  Polynomial out;
  for (const auto& t : poly) {
    for (int a = 0; a < n; ++a) {
      const int k = t.exps[a];
      if (k < 2) continue;
      Monomial d = t;
      d.coef *= k * (k - 1);
      d.exps[a] -= 2;
      out.push_back(d);
    }
  }
  return simplify(out);
}

bool is_harmonic(const Polynomial& poly, int n) { return is_zero(laplacian(poly, n)); }

double evaluate(const Polynomial& poly, const std::array<double, 3>& x) {
  double s = 0.0;
  for (const auto& t : poly) {
    double term = t.coef;
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < t.exps[a]; ++k) term *= x[a];
    s += term;
  }
  return s;
}

int degree(const Polynomial& poly) {
  int d = 0;
  for (const auto& t : poly) d = std::max(d, t.exps[0] + t.exps[1] + t.exps[2]);
  return d;
}

namespace {

std::array<int, 3> unit(int a, int k = 1) {
  std::array<int, 3> e{0, 0, 0};
  e[a] = k;
  return e;
}

std::array<int, 3> pair_exp(int a, int b) {
  std::array<int, 3> e{0, 0, 0};
  e[a] += 1;
  e[b] += 1;
  return e;
}

}  // namespace

std::vector<Polynomial> harmonic_basis(int n, int m) {
  if (n < 1 || n > 3) throw std::invalid_argument("harmonic_basis: n must be 1, 2 or 3");
  if (m < 0 || m > 2) throw std::invalid_argument("harmonic_basis: degree must be 0, 1 or 2");
  std::vector<Polynomial> basis;
  if (m == 0) {
    basis.push_back({{1.0, {0, 0, 0}}});
  } else if (m == 1) {
    for (int a = 0; a < n; ++a) basis.push_back({{1.0, unit(a)}});
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) basis.push_back({{1.0, pair_exp(a, b)}});
    for (int a = 0; a + 1 < n; ++a) basis.push_back({{1.0, unit(a, 2)}, {-1.0, unit(a + 1, 2)}});
    if (basis.empty()) throw std::invalid_argument("harmonic_basis: no harmonic quadratic in 1-D");
  }
  return basis;
}

std::vector<Polynomial> monomial_basis(int n, int m) {
  if (m < 0 || m > 2) throw std::invalid_argument("monomial_basis: degree must be 0, 1 or 2");
  std::vector<Polynomial> basis;
  if (m == 0) {
    basis.push_back({{1.0, {0, 0, 0}}});
  } else if (m == 1) {
    for (int a = 0; a < n; ++a) basis.push_back({{1.0, unit(a)}});
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) basis.push_back({{1.0, pair_exp(a, b)}});
  }
  return basis;
}

double homogeneous_decay_exponent(DatumRole role, const ModelParams& params) {
  return role == DatumRole::u ? 2.0 / params.p : params.p * params.n / (params.p + 2.0);
}

Polynomial datum_polynomial(const HomogeneousDatum& datum, DatumRole role, int n) {
  const auto basis = role == DatumRole::u ? harmonic_basis(n, datum.degree) : monomial_basis(n, datum.degree);
  std::vector<double> coefs = datum.coefficients;
  if (coefs.empty()) coefs.push_back(1.0);
  if (coefs.size() > basis.size())
    throw std::invalid_argument("homogeneous datum: " + std::to_string(coefs.size()) + " coefficients for a basis of " +
                                std::to_string(basis.size()));
  Polynomial poly;
  for (std::size_t i = 0; i < coefs.size(); ++i)
    for (const auto& t : basis[i]) poly.push_back({coefs[i] * t.coef, t.exps});
  poly = simplify(poly);
  if (role == DatumRole::u && !is_harmonic(poly, n))
    throw std::invalid_argument("homogeneous u-datum: Q_m is not harmonic");
  return poly;
}

double periodic_displacement(const Grid& grid, Index j, double c) {
  const double N = static_cast<double>(grid.points_per_dim());
  double k = static_cast<double>(j) - (c + grid.half_length()) / grid.dx();
  if (k >= N / 2) k -= N;
  if (k < -N / 2) k += N;
  return k * grid.dx();
}

namespace {

std::vector<double> center_or_origin(const std::vector<double>& c, int n) {
  if (c.empty()) return std::vector<double>(n, 0.0);
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("center has " + std::to_string(c.size()) + " components, grid dimension is " +
                                std::to_string(n));
  return c;
}

RealArray homogeneous_profile(const HomogeneousDatum& datum, DatumRole role, const Grid& g,
                              const ModelParams& params) {
  const int n = g.dim();
  if (n != params.n) throw std::invalid_argument("homogeneous datum: grid dimension differs from model n");
  if (datum.r_min < g.dx()) throw std::invalid_argument("homogeneous datum: r_min must be >= dx");
  const double r_edge = 0.5 * g.half_length();
  if (!(datum.r_out <= r_edge)) throw std::invalid_argument("homogeneous datum: r_out must be <= L/2");
  if (!(datum.r_out > datum.r_min)) throw std::invalid_argument("homogeneous datum: r_out must exceed r_min");
  const Polynomial Q = datum_polynomial(datum, role, n);
  const int m = datum.degree;
  const double d = homogeneous_decay_exponent(role, params);

  std::vector<std::vector<double>> centers = datum.centers;
  if (centers.empty()) centers.push_back({});
  RealArray total = RealArray::Zero(g.size());
  if (datum.amplitude == 0.0) return total;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const auto c = center_or_origin(centers[ci], n);
    for (double x : c)
      if (std::abs(x) > r_edge) throw std::invalid_argument("homogeneous datum: centers must satisfy |c_i| <= L/2");
    const double weight = ci < datum.weights.size() ? datum.weights[ci] : 1.0;
    RealArray single(g.size());
    for (Index j = 0; j < g.size(); ++j) {
      const auto idx = g.unravel(j);
      std::array<double, 3> y{0.0, 0.0, 0.0};
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        y[a] = periodic_displacement(g, idx[a], c[a]);
        r2 += y[a] * y[a];
      }
      const double r = std::sqrt(r2);
      double taper = 1.0;
      if (r >= r_edge) {
        single[j] = 0.0;
        continue;
      }
      if (r > datum.r_out) taper = 0.5 * (1.0 + std::cos(M_PI * (r - datum.r_out) / (r_edge - datum.r_out)));
      double value;
      if (datum.mollified) {
        const double rho = std::sqrt(r2 + datum.r_min * datum.r_min);
        value = evaluate(Q, y) * std::pow(rho, -d - m);
      } else if (r >= datum.r_min) {
        value = evaluate(Q, y) * std::pow(r, -d - m);
      } else if (r > 0.0) {
        std::array<double, 3> dir{y[0] / r, y[1] / r, y[2] / r};
        value = evaluate(Q, dir) * std::pow(datum.r_min, -d);
      } else {
        value = m == 0 ? evaluate(Q, y) * std::pow(datum.r_min, -d) : 0.0;
      }
      single[j] = datum.amplitude * weight * taper * value;
    }
    total += single;
  }
  return total;
}

}  // namespace

ComplexField make_u0_homogeneous(const HomogeneousDatum& datum, const GridPtr& grid, const ModelParams& params) {
  return ComplexField(grid, homogeneous_profile(datum, DatumRole::u, *grid, params).cast<Complex>());
}

RealField make_v0_homogeneous(const HomogeneousDatum& datum, const GridPtr& grid, const ModelParams& params) {
  return RealField(grid, homogeneous_profile(datum, DatumRole::v, *grid, params));
}

ComplexField make_schwartz(SchwartzKind kind, double amplitude, double width, const std::vector<double>& center,
                           const GridPtr& grid, const std::vector<double>& wavevector) {
  const Grid& g = *grid;
  const int n = g.dim();
  if (!(width >= 2.0 * g.dx())) throw std::invalid_argument("schwartz datum: width must be >= 2 dx");
  const auto c = center_or_origin(center, n);
  std::vector<double> k(n, 0.0);
  if (kind == SchwartzKind::modulated_gaussian) {
    if (static_cast<int>(wavevector.size()) != n)
      throw std::invalid_argument("modulated gaussian: wavevector needs " + std::to_string(n) + " components");
    k = wavevector;
  }
  ComplexArray values(g.size());
  const double inv = 1.0 / (2.0 * width * width);
  for (Index j = 0; j < g.size(); ++j) {
    const auto idx = g.unravel(j);
    double r2 = 0.0;
    double phase = 0.0;
    for (int a = 0; a < n; ++a) {
      const double y = periodic_displacement(g, idx[a], c[a]);
      r2 += y * y;
      phase += k[a] * y;
    }
    const double env = amplitude * std::exp(-r2 * inv);
    values[j] = kind == SchwartzKind::gaussian ? Complex(env, 0.0) : std::polar(env, phase);
  }
  return ComplexField(grid, std::move(values));
}

const char* to_string(DataKind kind) {
  switch (kind) {
    case DataKind::zero: return "zero";
    case DataKind::gaussian: return "gaussian";
    case DataKind::modulated_gaussian: return "modulated_gaussian";
    case DataKind::homogeneous: return "homogeneous";
  }
  return "unknown";
}

DataKind data_kind_from_string(const std::string& s) {
  if (s == "zero") return DataKind::zero;
  if (s == "gaussian") return DataKind::gaussian;
  if (s == "modulated_gaussian") return DataKind::modulated_gaussian;
  if (s == "homogeneous") return DataKind::homogeneous;
  throw std::invalid_argument("unknown data kind '" + s + "'");
}

DataRecipe DataRecipe::scaled(double factor) const {
  DataRecipe r = *this;
  r.amplitude *= factor;
  return r;
}

ComplexField make_u0(const DataRecipe& recipe, const GridPtr& grid, const ModelParams& params) {
  switch (recipe.kind) {
    case DataKind::zero: return ComplexField::zeros(grid);
    case DataKind::gaussian:
      return make_schwartz(SchwartzKind::gaussian, recipe.amplitude, recipe.width, recipe.center, grid);
    case DataKind::modulated_gaussian:
      return make_schwartz(SchwartzKind::modulated_gaussian, recipe.amplitude, recipe.width, recipe.center, grid,
                           recipe.wavevector);
    case DataKind::homogeneous: {
      HomogeneousDatum d = recipe.homogeneous;
      d.amplitude = recipe.amplitude;
      return make_u0_homogeneous(d, grid, params);
    }
  }
  throw std::invalid_argument("make_u0: unknown kind");
}

RealField make_v0(const DataRecipe& recipe, const GridPtr& grid, const ModelParams& params) {
  switch (recipe.kind) {
    case DataKind::zero: return RealField::zeros(grid);
    case DataKind::gaussian: {
      const ComplexField c = make_schwartz(SchwartzKind::gaussian, recipe.amplitude, recipe.width, recipe.center, grid);
      return RealField(grid, c.values().real());
    }
    case DataKind::modulated_gaussian:
      throw std::invalid_argument("v0 must be real: modulated_gaussian is not a v-datum");
    case DataKind::homogeneous: {
      HomogeneousDatum d = recipe.homogeneous;
      d.amplitude = recipe.amplitude;
      return make_v0_homogeneous(d, grid, params);
    }
  }
  throw std::invalid_argument("make_v0: unknown kind");
}

}  // namespace sdlab
