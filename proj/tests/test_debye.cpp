#include <doctest.h>

#include <cmath>

#include "sdlab/debye.hpp"
#include "sdlab/random_fields.hpp"
#include "sdlab/split_step.hpp"

using namespace sdlab;

namespace {
ModelParams params(double mu, int lambda, double p = 2.0) {
  ModelParams m;
  m.n = 1;
  m.p = p;
  m.mu = mu;
  m.lambda = lambda;
  return m;
}
}  // namespace

TEST_CASE("cell weights") {
  for (double x : {1e-8, 1e-3, 0.05, 0.0999, 0.1001, 1.0, 30.0}) {
    const auto w = debye_cell_weights(x, 1.0);
    const double E = std::exp(-x);
    CHECK(w.decay == doctest::Approx(E).epsilon(1e-15));
    CHECK(w.decay + w.w_start + w.w_end == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.w_start >= 0.0);
    CHECK(w.w_end >= 0.0);
    // Linear forcing f(s) = s: exact v(h) = h - mu (1 - e^{-h/mu}).
    CHECK(w.w_end * x == doctest::Approx(x + std::expm1(-x)).epsilon(1e-12));
  }
  CHECK_THROWS(debye_cell_weights(0.0, 1.0));
}

TEST_CASE("debye step closed forms") {
  RandomFieldSource src(4);
  auto g = make_grid(1, 4.0, 32);
  const RealField v = src.real_field(g);
  const auto zero = ComplexField::zeros(g);
  const ModelParams m = params(0.7, 1);
  const RealField out = debye_step(v, zero, zero, 0.3, m);
  CHECK((out.values() - std::exp(-0.3 / 0.7) * v.values()).abs().maxCoeff() < 1e-15);

  const ComplexField c(g, ComplexArray::Constant(g->size(), Complex(0.6, 0.8)));  // |u|^2 = 1
  for (int lambda : {1, -1}) {
    const RealField v1 = debye_step(RealField::zeros(g), c, c, 0.3, params(0.7, lambda));
    CHECK((v1.values() - lambda * (1.0 - std::exp(-0.3 / 0.7))).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("debye step is second order") {
  // Forcing f(t) = (1 + sin t)^2 through u(t) = 1 + sin t, compared with a fine reference.
  auto g = make_grid(1, 4.0, 8);
  const ModelParams m = params(0.5, 1);
  auto run = [&](int steps) {
    const double T = 1.0, h = T / steps;
    RealField v = RealField::zeros(g);
    for (int k = 0; k < steps; ++k) {
      const ComplexField a(g, ComplexArray::Constant(8, 1.0 + std::sin(k * h)));
      const ComplexField b(g, ComplexArray::Constant(8, 1.0 + std::sin((k + 1) * h)));
      v = debye_step(v, a, b, h, m);
    }
    return v.values()[0];
  };
  const double ref = run(1 << 14);
  const double e1 = std::abs(run(16) - ref), e2 = std::abs(run(32) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mild solution closed forms") {
  RandomFieldSource src(6);
  auto g = make_grid(1, 4.0, 16);
  const ModelParams m = params(1.3, -1);
  const RealField v0 = src.real_field(g);
  const std::vector<double> times = {0.0, 0.1, 0.4, 1.0, 2.5};
  const std::vector<ComplexField> zeros(times.size(), ComplexField::zeros(g));
  for (std::size_t j = 0; j < times.size(); ++j) {
    const RealField v = debye_mild_solution(v0, zeros, times, j, m);
    CHECK((v.values() - std::exp(-times[j] / m.mu) * v0.values()).abs().maxCoeff() < 1e-14);
  }
  const ComplexField u = src.complex_field(g);
  const std::vector<ComplexField> steady(times.size(), u);
  const RealArray f = modulus_power(u.values(), m.p);
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double e = std::exp(-times[j] / m.mu);
    const RealArray exact = e * v0.values() + m.lambda * f * (1.0 - e);
    CHECK((debye_mild_solution(v0, steady, times, j, m).values() - exact).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("mild solution matches composed steps") {
  RandomFieldSource src(8);
  auto g = make_grid(1, 4.0, 16);
  const ModelParams m = params(0.8, 1);
  const RealField v0 = src.real_field(g);
  std::vector<double> times;
  std::vector<ComplexField> snaps;
  for (int k = 0; k <= 10; ++k) {
    times.push_back(0.05 * k * k);
    snaps.push_back(src.complex_field(g));
  }
  RealField v = v0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    v = debye_step(v, snaps[k - 1], snaps[k], times[k] - times[k - 1], m);
    const RealField direct = debye_mild_solution(v0, snaps, times, k, m);
    const double scale = v.values().abs().maxCoeff();
    CHECK((direct.values() - v.values()).abs().maxCoeff() <= 1e-10 * scale);
  }
  DebyeKernelQuadrature q(times, m.mu);
  for (std::size_t j = 0; j < times.size(); ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k <= j; ++k) s += q.node_weight(j, k);
    CHECK(s * m.mu == doctest::Approx(q.kernel_integral_of_one(j)).epsilon(1e-13));
    CHECK(q.kernel_integral_of_one(j) == doctest::Approx(m.mu * (1 - std::exp(-times[j] / m.mu))).epsilon(1e-13));
  }
}

TEST_CASE("time derivative of v") {
  auto g = make_grid(1, 4.0, 8);
  RandomFieldSource src(10);
  const ComplexField u = src.complex_field(g);
  const ModelParams m = params(2.0, -1, 3.0);
  const RealField eq(g, m.lambda * modulus_power(u.values(), m.p));
  CHECK(vt_field(u, eq, m).values().abs().maxCoeff() < 1e-15);
  const RealField c(g, RealArray::Constant(8, 3.0));
  CHECK((vt_field(ComplexField::zeros(g), c, m).values() + 1.5).abs().maxCoeff() < 1e-15);
}

TEST_CASE("finite differences of v along a trajectory match vt_field") {
  auto g = make_grid(1, 8.0, 64);
  RandomFieldSource src(12);
  ModelParams m = params(1.0, 1);
  const ComplexField u0(g, 0.3 * src.complex_field(g).values());
  const RealField v0(g, 0.3 * src.real_field(g).values());
  double prev = 0.0;
  for (double dt : {0.02, 0.01}) {
    StepperConfig sc;
    sc.dt = dt;
    sc.horizon = 4 * dt;
    const Trajectory tr = simulate(u0, v0, sc, m);
    const RealArray fd = (tr.v[3].values() - tr.v[1].values()) / (2 * dt);
    const double err = (fd - vt_field(tr.u[2], tr.v[2], m).values()).abs().maxCoeff();
    if (prev > 0) CHECK(err < prev / 3.0);
    prev = err;
  }
}

TEST_CASE("nonnegative forcing keeps v nonnegative when lambda = +1") {
  RandomFieldSource src(14);
  auto g = make_grid(2, 4.0, 16);
  ModelParams m = params(0.4, 1);
  m.n = 2;
  for (int i = 0; i < 50; ++i) {
    const RealField v = debye_step(src.nonnegative_field(g), src.complex_field(g), src.complex_field(g),
                                   src.uniform(1e-4, 3.0), m);
    CHECK(v.values().minCoeff() >= 0.0);
  }
}
