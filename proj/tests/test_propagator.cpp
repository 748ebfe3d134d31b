#include <doctest.h>

#include <cmath>

#include "sdlab/initial_data.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/random_fields.hpp"

using namespace sdlab;

TEST_CASE("t = 0 returns the input") {
  RandomFieldSource src(1);
  auto g = make_grid(2, 8.0, 32);
  const Propagator prop(g);
  const ComplexField f = src.complex_field(g);
  CHECK((prop.propagate(f, 0.0).values() == f.values()).all());
}

TEST_CASE("plane waves are eigenfunctions") {
  auto g = make_grid(1, 8.0, 64);
  const Propagator prop(g);
  const double xi0 = M_PI * 5.0 / 8.0, t = 0.73;
  ComplexArray a(g->size());
  for (Index j = 0; j < g->size(); ++j) a[j] = std::polar(1.0, xi0 * g->coordinate(j));
  const ComplexArray expected = a * std::polar(1.0, -xi0 * xi0 * t / 2.0);
  CHECK((prop.propagate(a, t) - expected).abs().maxCoeff() < 1e-12);
}

TEST_CASE("free Gaussian in one dimension") {
  auto g = make_grid(1, 32.0, 512);
  const Propagator prop(g);
  const ComplexField g0 = make_schwartz(SchwartzKind::gaussian, 1.0, 1.0, {}, g);
  for (double t : {0.5, 1.0, 2.0}) {
    const ComplexArray ut = prop.propagate(g0.values(), t);
    const Complex a(1.0, t);
    double worst = 0.0;
    for (Index j = 0; j < g->size(); ++j) {
      const double x = g->coordinate(j);
      const Complex exact = std::exp(-x * x / (2.0 * a)) / std::sqrt(a);
      worst = std::max(worst, std::abs(ut[j] - exact));
    }
    CHECK(worst < 1e-8);
    CHECK(ut.abs().maxCoeff() == doctest::Approx(std::pow(1.0 + t * t, -0.25)).epsilon(1e-8));
  }
}

TEST_CASE("group laws") {
  RandomFieldSource src(2);
  for (int n = 1; n <= 3; ++n) {
    auto g = make_grid(n, 6.0, n == 3 ? 16 : 64);
    const Propagator prop(g);
    const auto chk = group_laws_check(prop, src.complex_field(g), 0.3, 0.7);
    CHECK(chk.passed);
    CHECK(chk.unitarity_error < 1e-12);
    CHECK(chk.composition_error < 1e-10);
    CHECK(chk.inverse_error < 1e-10);
  }
  auto g = make_grid(1, 6.0, 64);
  const auto zero = group_laws_check(Propagator(g), ComplexField::zeros(g), 1.0, 2.0);
  CHECK(zero.passed);
  CHECK(zero.composition_error == 0.0);
}

TEST_CASE("dispersive probe") {
  auto g = make_grid(2, 32.0, 256);
  const Propagator prop(g);
  ModelParams m;
  const std::vector<double> times = {0.25, 0.5, 1.0, 2.0, 4.0};
  const auto zero = dispersive_probe(prop, ComplexField::zeros(g), m, times);
  for (double x : zero.norms) CHECK(x == 0.0);
  const auto probe = dispersive_probe(prop, make_schwartz(SchwartzKind::gaussian, 1.0, 1.0, {}, g), m, times);
  REQUIRE(probe.norms.size() == times.size());
  for (std::size_t k = 1; k < times.size(); ++k) CHECK(probe.norms[k] < probe.norms[k - 1]);
  // Weighted values t^{1/2}||S(t)phi||_4 grow and flatten towards their limit.
  const auto& w = probe.weighted_value;
  CHECK(w[4] - w[3] < w[1] - w[0]);
  CHECK(probe.fitted_constant > 0.0);
  CHECK_THROWS(dispersive_probe(prop, ComplexField::zeros(g), m, {}));
}
