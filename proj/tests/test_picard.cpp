#include <doctest.h>

#include <cmath>

#include "sdlab/initial_data.hpp"
#include "sdlab/picard.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/random_fields.hpp"

using namespace sdlab;

namespace {
ModelParams mp(int n, double p) {
  ModelParams m;
  m.n = n;
  m.p = p;
  return m;
}
}  // namespace

TEST_CASE("graded mesh") {
  const auto mesh = graded_mesh(4.0, 64, 2.0);
  REQUIRE(mesh.size() == 65);
  CHECK(mesh.front() == 0.0);
  CHECK(mesh.back() == 4.0);
  CHECK(mesh[1] == doctest::Approx(4.0 / 4096.0));
  for (std::size_t k = 2; k < mesh.size(); ++k) CHECK(mesh[k] - mesh[k - 1] > mesh[k - 1] - mesh[k - 2]);
  CHECK_THROWS(graded_mesh(0.0, 4));
  CHECK_THROWS(graded_mesh(1.0, 0));
}

TEST_CASE("Phi1 with v = 0 is the free evolution") {
  RandomFieldSource src(3);
  auto g = make_grid(2, 8.0, 32);
  const ModelParams m = mp(2, 2);
  const auto mesh = graded_mesh(2.0, 8);
  const ComplexField u0 = src.complex_field(g);
  const std::vector<ComplexField> u(mesh.size(), u0);
  const std::vector<RealField> v(mesh.size(), RealField::zeros(g));
  const Propagator prop(g);
  const auto out = apply_phi1(u, v, u0, mesh, m);
  for (std::size_t j = 0; j < mesh.size(); ++j)
    CHECK((out[j].values() - prop.propagate(u0.values(), mesh[j])).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Phi1 of a constant source") {
  auto g = make_grid(2, 8.0, 16);
  const ModelParams m = mp(2, 2);
  const auto mesh = graded_mesh(2.0, 8);
  const Complex c(0.3, -0.2);
  const std::vector<ComplexField> u(mesh.size(), ComplexField(g, ComplexArray::Constant(g->size(), c)));
  const std::vector<RealField> v(mesh.size(), RealField(g, RealArray::Ones(g->size())));
  const auto trap = apply_phi1(u, v, ComplexField::zeros(g), mesh, m, FirstCellRule::trapezoid);
  for (std::size_t j = 0; j < mesh.size(); ++j)
    CHECK((trap[j].values() - Complex(0.0, -mesh[j]) * c).abs().maxCoeff() < 1e-13);
  // The power-law rule integrates s^{-(alpha+beta)} exactly on the first cell, so a constant picks up
  // a fixed first-cell surplus of (1/(1 - alpha - beta) - 1) t_1 c.
  const auto pl = apply_phi1(u, v, ComplexField::zeros(g), mesh, m, FirstCellRule::power_law);
  const double surplus = (1.0 / (1.0 - 0.75) - 1.0) * mesh[1];
  for (std::size_t j = 1; j < mesh.size(); ++j)
    CHECK((pl[j].values() - Complex(0.0, -(mesh[j] + surplus)) * c).abs().maxCoeff() < 1e-13);
}

TEST_CASE("Phi1 quadrature converges at second order away from the origin") {
  auto g = make_grid(1, 8.0, 64);
  const ModelParams m = mp(1, 3);
  const double T = 2.0;
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 0.5, 1.0, {}, g);
  const Propagator prop(g);
  auto run = [&](int cells) {
    const auto mesh = graded_mesh(T, cells, 1.0);
    std::vector<ComplexField> u;
    std::vector<RealField> v;
    for (double t : mesh) {
      u.push_back(prop.propagate(u0, t));
      v.push_back(RealField(g, RealArray::Constant(g->size(), std::cos(t))));
    }
    return apply_phi1(u, v, u0, mesh, m, FirstCellRule::trapezoid).back().values();
  };
  const ComplexArray ref = run(1024);
  const double e1 = (run(16) - ref).abs().maxCoeff();
  const double e2 = (run(32) - ref).abs().maxCoeff();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("Phi2 closed forms and independence from v") {
  RandomFieldSource src(4);
  auto g = make_grid(2, 8.0, 16);
  ModelParams m = mp(2, 2);
  m.mu = 0.6;
  const auto mesh = graded_mesh(3.0, 10);
  const RealField v0 = src.real_field(g);
  const std::vector<ComplexField> zeros(mesh.size(), ComplexField::zeros(g));
  const auto a = apply_phi2(zeros, v0, mesh, m);
  for (std::size_t j = 0; j < mesh.size(); ++j)
    CHECK((a[j].values() - std::exp(-mesh[j] / m.mu) * v0.values()).abs().maxCoeff() < 1e-14);
  const ComplexField u = src.complex_field(g);
  const auto b = apply_phi2(std::vector<ComplexField>(mesh.size(), u), v0, mesh, m);
  const RealArray f = u.values().abs2();
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double e = std::exp(-mesh[j] / m.mu);
    CHECK((b[j].values() - (e * v0.values() + f * (1 - e))).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("zero data is a fixed point") {
  auto g = make_grid(2, 8.0, 16);
  const auto res = picard_iterate(ComplexField::zeros(g), RealField::zeros(g), graded_mesh(1.0, 8), mp(2, 2));
  CHECK(res.status == PicardStatus::converged);
  REQUIRE(res.diagnostics.iterations.size() == 1);
  CHECK(res.diagnostics.iterations[0].distance == 0.0);
  const auto rec = recurrence_tracker(res.diagnostics, mp(2, 2));
  CHECK_FALSE(rec.applicable);
}

TEST_CASE("small Gaussian data contract") {
  auto g = make_grid(2, 16.0, 64);
  const ModelParams m = mp(2, 2);
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 0.05, 1.0, {}, g);
  const auto res = picard_iterate(u0, RealField::zeros(g), graded_mesh(2.0, 32), m);
  CHECK(res.status == PicardStatus::converged);
  const auto ratios = res.diagnostics.ratios();
  REQUIRE_FALSE(ratios.empty());
  for (double r : ratios) CHECK(r < 1.0);
  const auto rec = recurrence_tracker(res.diagnostics, m);
  CHECK(rec.applicable);
  CHECK(rec.holds);
  CHECK(rec.holds_strong);
}

TEST_CASE("contraction ratio grows with amplitude") {
  auto g = make_grid(2, 16.0, 64);
  const ModelParams m = mp(2, 2);
  PicardOptions o;
  o.max_iters = 4;
  double prev = 0.0;
  for (double a : {0.05, 0.2, 0.8}) {
    const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, a, 1.0, {}, g);
    const auto res = picard_iterate(u0, RealField::zeros(g), graded_mesh(2.0, 16), m, o);
    const double r = res.diagnostics.max_ratio();
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("large data are diagnosed") {
  auto g = make_grid(2, 16.0, 64);
  const ModelParams m = mp(2, 2);
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 20.0, 1.0, {}, g);
  const auto res = picard_iterate(u0, RealField::zeros(g), graded_mesh(2.0, 16), m);
  CHECK((res.status == PicardStatus::non_contraction || res.status == PicardStatus::diverged));
  CHECK(res.diagnostics.max_ratio() >= 1.0);
}

TEST_CASE("inadmissible parameters are refused") {
  auto g = make_grid(1, 8.0, 32);
  CHECK_THROWS(picard_iterate(ComplexField::zeros(g), RealField::zeros(g), graded_mesh(1.0, 4), mp(1, 2)));
}

TEST_CASE("full metric and worker count give the same iterates") {
  auto g = make_grid(2, 16.0, 64);
  const ModelParams m = mp(2, 2);
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 0.1, 1.5, {}, g);
  PicardOptions a, b;
  a.max_iters = b.max_iters = 3;
  b.workers = 2;
  const auto ra = picard_iterate(u0, RealField::zeros(g), graded_mesh(1.0, 8), m, a);
  const auto rb = picard_iterate(u0, RealField::zeros(g), graded_mesh(1.0, 8), m, b);
  CHECK((ra.trajectory.u.back().values() == rb.trajectory.u.back().values()).all());
  b.workers = 1;
  b.metric = WeakMetric::full;
  const auto rc = picard_iterate(u0, RealField::zeros(g), graded_mesh(1.0, 8), m, b);
  CHECK((ra.trajectory.u.back().values() == rc.trajectory.u.back().values()).all());
  CHECK(rc.diagnostics.iterations[0].distance >= ra.diagnostics.iterations[0].distance);
}

TEST_CASE("pointwise Lipschitz bound") {
  RandomFieldSource src(17);
  auto g = make_grid(2, 4.0, 16);
  for (int i = 0; i < 100; ++i) {
    const double p = src.uniform(1.01, 6.0);
    CHECK(lipschitz_violation(src.complex_field(g), src.complex_field(g), p) <= 1e-12);
  }
}
