#include <doctest.h>

#include <cmath>

#include "sdlab/initial_data.hpp"
#include "sdlab/lorentz.hpp"

using namespace sdlab;

namespace {
ModelParams mp(int n, double p) {
  ModelParams m;
  m.n = n;
  m.p = p;
  return m;
}
HomogeneousDatum datum(double amp, double r_min, double r_out, int degree = 0) {
  HomogeneousDatum d;
  d.amplitude = amp;
  d.r_min = r_min;
  d.r_out = r_out;
  d.degree = degree;
  return d;
}
Index index_of(const Grid& g, double x, double y) {
  const auto ix = static_cast<Index>(std::lround((x + g.half_length()) / g.dx()));
  const auto iy = static_cast<Index>(std::lround((y + g.half_length()) / g.dx()));
  return g.ravel({ix, iy, 0});
}
}  // namespace

TEST_CASE("symbolic Laplacian") {
  // x^2 - y^2 is harmonic in 2-D, x^2 is not.
  const Polynomial h = {{1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}};
  CHECK(is_harmonic(h, 2));
  const Polynomial q = {{1.0, {2, 0, 0}}};
  CHECK_FALSE(is_harmonic(q, 2));
  const Polynomial lap = simplify(laplacian(q, 2));
  REQUIRE(lap.size() == 1);
  CHECK(lap[0].coef == 2.0);
  CHECK(degree(h) == 2);
  CHECK(evaluate(h, {3.0, 1.0, 0.0}) == 8.0);
}

TEST_CASE("harmonic bases") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) {
      if (n == 1 && m == 2) {
        CHECK_THROWS(harmonic_basis(n, m));
        continue;
      }
      const auto basis = harmonic_basis(n, m);
      CHECK_FALSE(basis.empty());
      for (const auto& p : basis) {
        CHECK(is_harmonic(p, n));
        CHECK(degree(p) == m);
      }
    }
  CHECK(harmonic_basis(2, 2).size() == 2);
  CHECK(harmonic_basis(3, 2).size() == 5);
}

TEST_CASE("decay exponents") {
  CHECK(homogeneous_decay_exponent(DatumRole::u, mp(2, 2)) == doctest::Approx(1.0));
  CHECK(homogeneous_decay_exponent(DatumRole::v, mp(2, 2)) == doctest::Approx(1.0));
  CHECK(homogeneous_decay_exponent(DatumRole::u, mp(2, 8)) == doctest::Approx(0.25));
  CHECK(homogeneous_decay_exponent(DatumRole::v, mp(2, 8)) == doctest::Approx(1.6));
}

TEST_CASE("homogeneous u datum scales exactly in the clean annulus") {
  auto g = make_grid(2, 16.0, 256);
  for (int m : {0, 1, 2}) {
    const HomogeneousDatum d = datum(0.7, 0.5, 8.0, m);
    const ComplexField u = make_u0_homogeneous(d, g, mp(2, 2));
    for (double x : {1.0, 1.25, 1.5, 2.0})
      for (double y : {0.0, 0.5, 1.0}) {
        const Complex a = u.values()[index_of(*g, x, y)];
        const Complex b = u.values()[index_of(*g, 2 * x, 2 * y)];
        // Q_m(x)|x|^{-2/p-m} is homogeneous of degree -2/p.
        if (std::abs(a) > 0) CHECK(std::abs(std::abs(b) / std::abs(a) - 0.5) < 1e-10);
      }
  }
}

TEST_CASE("homogeneous datum: cap, taper and validation") {
  auto g = make_grid(2, 16.0, 128);
  const HomogeneousDatum d = datum(1.0, 1.0, 6.0);
  const ComplexField u = make_u0_homogeneous(d, g, mp(2, 2));
  CHECK(std::abs(u.values()[index_of(*g, 0.0, 0.0)]) == doctest::Approx(1.0));
  CHECK(std::abs(u.values()[index_of(*g, 0.5, 0.0)]) == doctest::Approx(1.0));
  CHECK(std::abs(u.values()[index_of(*g, 9.0, 0.0)]) == 0.0);
  const double mid = std::abs(u.values()[index_of(*g, 7.0, 0.0)]);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0 / 7.0);
  CHECK(make_u0_homogeneous(datum(0.0, 1.0, 6.0), g, mp(2, 2)).values().abs().maxCoeff() == 0.0);
  CHECK_THROWS(make_u0_homogeneous(datum(1.0, 0.1, 6.0), g, mp(2, 2)));
  CHECK_THROWS(make_u0_homogeneous(datum(1.0, 1.0, 9.0), g, mp(2, 2)));
  CHECK_THROWS(make_u0_homogeneous(datum(1.0, 2.0, 1.5), g, mp(2, 2)));
}

TEST_CASE("two-center datum is the sum of single-center data") {
  auto g = make_grid(2, 16.0, 128);
  HomogeneousDatum a = datum(0.3, 0.5, 4.0), b = a, both = a;
  a.centers = {{-2.0, 1.0}};
  b.centers = {{3.0, -1.5}};
  both.centers = {{-2.0, 1.0}, {3.0, -1.5}};
  const ModelParams m = mp(2, 2);
  const ComplexArray sum = make_u0_homogeneous(a, g, m).values() + make_u0_homogeneous(b, g, m).values();
  CHECK((make_u0_homogeneous(both, g, m).values() == sum).all());
  const RealArray vs = make_v0_homogeneous(a, g, m).values() + make_v0_homogeneous(b, g, m).values();
  CHECK((make_v0_homogeneous(both, g, m).values() == vs).all());
}

TEST_CASE("v datum quasi-norm of the truncated |x|^-1") {
  auto g = make_grid(2, 16.0, 1024);
  const double eps = 0.05;
  const RealField v = make_v0_homogeneous(datum(eps, 16 * g->dx(), 8.0), g, mp(2, 2));
  CHECK(std::abs(weak_quasi_norm(v, 2.0) - eps * std::sqrt(M_PI)) / (eps * std::sqrt(M_PI)) < 0.02);
}

TEST_CASE("strong norms grow under refinement while the quasi-norm settles") {
  const ModelParams m = mp(2, 2);
  // Local mass diverges logarithmically, so the L^2 norm creeps up with each refinement.
  std::vector<double> l2, quasi;
  for (Index N : {128, 256, 512}) {
    auto g = make_grid(2, 16.0, N);
    const ComplexField u = make_u0_homogeneous(datum(1.0, g->dx(), 8.0), g, m);
    l2.push_back(strong_norm(u, 2.0));
    quasi.push_back(weak_quasi_norm(u, 2.0));
  }
  CHECK(l2[1] > l2[0] * 1.02);
  CHECK(l2[2] > l2[1] * 1.02);
  CHECK(std::abs(quasi[2] - quasi[1]) < std::abs(l2[2] - l2[1]));
}

TEST_CASE("Schwartz data") {
  for (int n = 1; n <= 3; ++n) {
    auto g = make_grid(n, 8.0, n == 3 ? 32 : 64);
    const ComplexField f = make_schwartz(SchwartzKind::gaussian, 1.0, 1.0, {}, g);
    const double integral = lebesgue_integral(f, [](const Complex& z) { return z.real(); });
    CHECK(std::abs(integral - std::pow(2 * M_PI, n / 2.0)) < 1e-12);
  }
  auto g = make_grid(1, 8.0, 64);
  CHECK(make_schwartz(SchwartzKind::gaussian, 0.0, 1.0, {}, g).values().abs().maxCoeff() == 0.0);
  CHECK_THROWS(make_schwartz(SchwartzKind::gaussian, 1.0, 0.1, {}, g));
  // A grid-aligned shift is a circular shift of the values.
  const ComplexArray c0 = make_schwartz(SchwartzKind::gaussian, 1.0, 1.0, {}, g).values();
  const ComplexArray c1 = make_schwartz(SchwartzKind::gaussian, 1.0, 1.0, {3 * g->dx()}, g).values();
  for (Index j = 0; j < 64; ++j) CHECK(c1[(j + 3) % 64] == c0[j]);
  const ComplexField mod = make_schwartz(SchwartzKind::modulated_gaussian, 1.0, 1.0, {}, g, {2.0});
  CHECK((mod.values().abs() - c0.abs()).abs().maxCoeff() < 1e-15);
}

TEST_CASE("homogeneous center shift is a circular shift") {
  auto g = make_grid(2, 16.0, 64);
  HomogeneousDatum a = datum(1.0, 1.0, 6.0), b = a;
  b.centers = {{2 * g->dx(), -3 * g->dx()}};
  const ComplexArray u0 = make_u0_homogeneous(a, g, mp(2, 2)).values();
  const ComplexArray u1 = make_u0_homogeneous(b, g, mp(2, 2)).values();
  for (Index j = 0; j < g->size(); ++j) {
    const auto idx = g->unravel(j);
    const Index k = g->ravel({(idx[0] + 2) % 64, (idx[1] + 64 - 3) % 64, 0});
    CHECK(u1[k] == u0[j]);
  }
}

TEST_CASE("data recipes") {
  auto g = make_grid(2, 16.0, 64);
  const ModelParams m = mp(2, 2);
  DataRecipe r;
  CHECK(make_u0(r, g, m).values().abs().maxCoeff() == 0.0);
  r.kind = DataKind::gaussian;
  r.amplitude = 0.4;
  const DataRecipe s = r.scaled(2.5);
  CHECK(s.amplitude == doctest::Approx(1.0));
  CHECK(make_u0(s, g, m).values().abs().maxCoeff() == doctest::Approx(1.0));
  CHECK(data_kind_from_string(to_string(DataKind::homogeneous)) == DataKind::homogeneous);
  CHECK_THROWS(data_kind_from_string("sinc"));
}
