#include <doctest.h>

#include <cmath>

#include "sdlab/diagnostics.hpp"
#include "sdlab/initial_data.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/split_step.hpp"

using namespace sdlab;

TEST_CASE("fit of an exact power law") {
  const auto t = log_spaced(0.5, 50.0, 16);
  REQUIRE(t.size() == 16);
  CHECK(t.front() == doctest::Approx(0.5));
  CHECK(t.back() == doctest::Approx(50.0));
  std::vector<double> y;
  for (double x : t) y.push_back(3.0 * std::pow(x, -0.25));
  const DecayFit f = fit_decay(t, y, -0.25);
  CHECK(std::abs(f.slope + 0.25) < 1e-12);
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.relative_error < 1e-10);
  CHECK(f.spans_decade());
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit of constant samples and bad inputs") {
  const auto t = log_spaced(1.0, 10.0, 8);
  const DecayFit f = fit_decay(t, std::vector<double>(8, 2.0), -0.5);
  CHECK(std::abs(f.slope) < 1e-14);
  CHECK(f.r2 == 1.0);
  CHECK_THROWS(fit_decay({1, 2, 3}, {1, 1, 1}, -1.0));
  std::vector<double> bad(8, 1.0);
  bad[5] = 0.0;
  CHECK_THROWS_WITH(fit_decay(t, bad, -1.0), doctest::Contains("5"));
}

TEST_CASE("free-flow slope of a Gaussian") {
  auto g = make_grid(2, 64.0, 512);
  const Propagator prop(g);
  ModelParams m;
  const auto times = log_spaced(1.0, 10.0, 10);
  const auto probe = dispersive_probe(prop, make_schwartz(SchwartzKind::gaussian, 1.0, 0.5, {}, g), m, times);
  const DecayFit f = fit_decay(times, probe.norms, -0.5);
  CHECK(f.relative_error < 0.05);
}

TEST_CASE("no-wrap margin") {
  auto g = make_grid(1, 32.0, 256);
  const ComplexField narrow = make_schwartz(SchwartzKind::gaussian, 1.0, 0.5, {}, g);
  const ComplexField wide = make_schwartz(SchwartzKind::gaussian, 1.0, 2.0, {}, g);
  CHECK(spectral_radius(narrow, 0.5) > spectral_radius(wide, 0.5));
  CHECK(no_wrap_margin(wide, 1.0, 0.5) > no_wrap_margin(narrow, 1.0, 0.5));
  CHECK(no_wrap_margin(wide, 2.0, 0.5) == doctest::Approx(no_wrap_margin(wide, 1.0, 0.5) / 2.0));
  // A plane wave at xi0 has all its spectral mass at |xi0|.
  ComplexArray a(g->size());
  const double xi0 = M_PI * 8 / 32.0;
  for (Index j = 0; j < g->size(); ++j) a[j] = std::polar(1.0, xi0 * g->coordinate(j));
  CHECK(spectral_radius(ComplexField(g, a), 0.5) == doctest::Approx(xi0));
  CHECK(no_wrap_margin(ComplexField(g, a), 4.0, 0.5) == doctest::Approx(16.0 / (xi0 * 4.0)));
}

TEST_CASE("zero data give a degenerate pass") {
  auto g = make_grid(2, 16.0, 32);
  DecayOptions o;
  o.horizon = 8.0;
  o.samples = 8;
  const auto ex = theorem1_decay_experiment(DataRecipe{}, DataRecipe{}, g, ModelParams{}, o);
  CHECK(ex.verdict == DecayVerdict::degenerate_pass);
  CHECK(is_pass(ex.verdict));
}

TEST_CASE("decay experiment on small Gaussian data is wrap-limited and downgrades") {
  auto g = make_grid(2, 16.0, 64);
  DecayOptions o;
  o.horizon = 16.0;
  o.dt = 0.1;
  o.samples = 12;
  DataRecipe u;
  u.kind = DataKind::gaussian;
  u.amplitude = 0.05;
  u.width = 1.0;
  const auto ex = theorem1_decay_experiment(u, DataRecipe{}, g, ModelParams{}, o);
  CHECK(ex.samples.size() == 12);
  for (const auto& s : ex.samples) CHECK(s.mass == doctest::Approx(ex.samples.front().mass).epsilon(1e-10));
  if (ex.downgraded) CHECK(ex.detail.find("trend") != std::string::npos);
}

TEST_CASE("stability classification thresholds") {
  std::string detail;
  CHECK(classify_stability({1.0, 0.5, 0.05}, {1.0, 0.3, 0.09}, 0.1, 0.5, &detail) == StabilityVerdict::vanishing);
  CHECK(classify_stability({1.0, 0.9, 0.8}, {1.0, 1.0, 1.0}, 0.1, 0.5) == StabilityVerdict::persistent);
  CHECK(classify_stability({1.0, 0.4, 0.8}, {1.0, 1.0, 1.0}, 0.1, 0.5) == StabilityVerdict::mixed);
  CHECK(classify_stability({1.0, 0.5, 0.05}, {1.0, 1.0, 1.0}, 0.1, 0.5) == StabilityVerdict::mixed);
  CHECK_FALSE(detail.empty());
}

TEST_CASE("stability experiment refuses weights outside the admissible range") {
  auto g = make_grid(2, 16.0, 32);
  StabilityOptions o;
  o.horizon = 4.0;
  o.samples = 4;
  CHECK_THROWS(stability_experiment(DataRecipe{}, DataRecipe{}, DataRecipe{}, DataRecipe{}, 0.5, g, ModelParams{}, o));
}

TEST_CASE("conservation report") {
  auto g = make_grid(1, 32.0, 256);
  ModelParams m;
  m.n = 1;
  StepperConfig c;
  c.dt = 0.01;
  c.horizon = 0.5;
  c.stride = 5;
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 0.3, 1.0, {}, g);
  const auto rep = conservation_report(simulate(u0, RealField::zeros(g), c, m), m);
  CHECK(rep.max_relative_drift < 1e-10);
  CHECK(rep.has_pseudo_hamiltonian);
  CHECK(rep.ph_residual.size() + 2 == rep.times.size());
  m.p = 3.0;
  CHECK_FALSE(conservation_report(simulate(u0, RealField::zeros(g), c, m), m).has_pseudo_hamiltonian);
}
