// Randomized invariants over seeded generators; every case runs on 100 draws.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sdlab/debye.hpp"
#include "sdlab/diagnostics.hpp"
#include "sdlab/initial_data.hpp"
#include "sdlab/lorentz.hpp"
#include "sdlab/picard.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/random_fields.hpp"
#include "sdlab/split_step.hpp"

using namespace sdlab;

namespace {

constexpr int kDraws = 100;

GridPtr small_grid(int n) { return make_grid(n, 8.0, n == 1 ? 256 : (n == 2 ? 32 : 16)); }

// Circular shift by (a, b, c) cells.
ComplexArray shift(const Grid& g, const ComplexArray& f, std::array<Index, 3> by) {
  ComplexArray out(f.size());
  const Index N = g.points_per_dim();
  for (Index j = 0; j < f.size(); ++j) {
    auto idx = g.unravel(j);
    for (int d = 0; d < g.dim(); ++d) idx[d] = (idx[d] + by[d]) % N;
    out[g.ravel(idx)] = f[j];
  }
  return out;
}

}  // namespace

TEST_CASE("admissible exponents lie in the integrable range") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pd(0.2, 12.0);
  int admissible = 0;
  for (int i = 0; i < kDraws * 10; ++i) {
    ModelParams m;
    m.n = 1 + static_cast<int>(rng() % 3);
    m.p = pd(rng);
    if (!is_admissible(m).admissible) continue;
    ++admissible;
    const auto e = derive_exponents(m);
    CHECK(e.alpha > 0.0);
    CHECK(e.beta > 0.0);
    CHECK(e.alpha + e.beta < 1.0);
    CHECK(e.dispersive_exp < 1.0);
    CHECK(e.h_max > 0.0);
  }
  CHECK(admissible > kDraws);
  CHECK(critical_power(1) > critical_power(2));
  CHECK(critical_power(2) > critical_power(3));
}

TEST_CASE("transforms, integrals and energies") {
  RandomFieldSource src(101);
  for (int i = 0; i < kDraws; ++i) {
    const int n = 1 + i % 3;
    auto g = small_grid(n);
    const ComplexField f = src.complex_field(g);
    const double scale = std::sqrt(f.values().abs2().sum());
    CHECK(std::sqrt((g->inverse(g->forward(f.values())) - f.values()).abs2().sum()) < 1e-12 * scale);

    const RealField a = src.nonnegative_field(g), b = src.nonnegative_field(g);
    const double c = src.uniform(-3.0, 3.0);
    auto integral = [](const RealField& x) { return lebesgue_integral(x, [](double y) { return y; }); };
    const RealField lin(g, a.values() + c * b.values());
    const double bound = integral(a) + std::abs(c) * integral(b);
    CHECK(std::abs(integral(lin) - (integral(a) + c * integral(b))) <= 1e-12 * bound);
    const RealField bigger(g, a.values() + b.values());
    CHECK(integral(bigger) >= integral(a));

    const std::array<Index, 3> by = {static_cast<Index>(src.uniform(0, 15)), static_cast<Index>(src.uniform(0, 15)),
                                     static_cast<Index>(src.uniform(0, 15))};
    const double e0 = gradient_energy(f);
    CHECK(gradient_energy(ComplexField(g, shift(*g, f.values(), by))) == doctest::Approx(e0).epsilon(1e-10));
  }
}

TEST_CASE("rearrangement norms") {
  RandomFieldSource src(202);
  for (int i = 0; i < kDraws; ++i) {
    auto g = small_grid(1 + i % 3);
    const ComplexField f = src.complex_field(g);
    const double r = src.uniform(1.05, 8.0);
    const Rearrangement re = decreasing_rearrangement(f);
    const WeakNorms w = weak_norms(re, r);
    const double s = strong_norm(f, r);
    CHECK(w.quasi <= w.full + 1e-12 * w.full);
    CHECK(w.full <= r / (r - 1.0) * w.quasi + 1e-12 * w.full);
    CHECK(w.quasi <= s * (1 + 1e-12));
    for (int k = 0; k < 8; ++k) {
      const double t = src.uniform(0.0, 1.2 * re.values.front());
      CHECK(distribution_function(f, t) == re.distribution(t));
    }
    const double c = src.uniform(-4.0, 4.0);
    const ComplexField cf(g, Complex(c, 0.5 * c) * f.values());
    const double ac = std::abs(Complex(c, 0.5 * c));
    const WeakNorms wc = weak_norms(cf, r);
    CHECK(wc.quasi == doctest::Approx(ac * w.quasi).epsilon(1e-12));
    CHECK(wc.full == doctest::Approx(ac * w.full).epsilon(1e-12));
    CHECK(strong_norm(cf, r) == doctest::Approx(ac * s).epsilon(1e-12));

    ComplexArray perm = f.values();
    std::shuffle(perm.data(), perm.data() + perm.size(), src.engine());
    const ComplexField pf(g, perm);
    CHECK(weak_quasi_norm(pf, r) == w.quasi);
    CHECK(weak_norm(pf, r) == w.full);
    CHECK(strong_norm(pf, r) == doctest::Approx(s).epsilon(1e-13));

    const ComplexField h = src.complex_field(g);
    const double r1 = src.uniform(2.05, 10.0);
    const double r2 = src.uniform(r1 / (r1 - 1.0) + 0.05, 12.0);
    CHECK(holder_check(f, h, r1, r2).holds);
  }
}

TEST_CASE("free group") {
  RandomFieldSource src(303);
  for (int i = 0; i < kDraws; ++i) {
    auto g = small_grid(1 + i % 3);
    const Propagator prop(g);
    const auto chk = group_laws_check(prop, src.complex_field(g), src.uniform(-5, 5), src.uniform(-5, 5));
    CHECK(chk.unitarity_error < 1e-12);
    CHECK(chk.composition_error < 1e-10);
    CHECK(chk.inverse_error < 1e-10);
  }
}

TEST_CASE("Debye relaxation") {
  RandomFieldSource src(404);
  for (int i = 0; i < kDraws; ++i) {
    auto g = small_grid(1 + i % 3);
    ModelParams m;
    m.n = g->dim();
    m.p = src.uniform(1.0, 5.0);
    m.mu = src.uniform(0.05, 3.0);
    const RealField v0 = src.nonnegative_field(g);
    std::vector<double> times = {0.0};
    std::vector<ComplexField> snaps = {src.complex_field(g)};
    for (int k = 0; k < 6; ++k) {
      times.push_back(times.back() + src.uniform(1e-3, 1.0));
      snaps.push_back(src.complex_field(g));
    }
    double sup_forcing = 0.0;
    for (const auto& u : snaps) sup_forcing = std::max(sup_forcing, modulus_power(u.values(), m.p).maxCoeff());
    const double rv = (m.p + 2.0) / m.p;
    const double v0_norm = weak_quasi_norm(v0, rv);
    for (std::size_t j = 1; j < times.size(); ++j) {
      const RealField v = debye_mild_solution(v0, snaps, times, j, m);
      CHECK(v.values().minCoeff() >= 0.0);
      const double e = std::exp(-times[j] / m.mu);
      CHECK(v.values().maxCoeff() <= e * v0.values().maxCoeff() + sup_forcing * (1 - e) + 1e-12);
      CHECK(weak_quasi_norm(RealField(g, e * v0.values()), rv) <= v0_norm);
    }
  }
}

TEST_CASE("split-step mass is exact for all couplings") {
  RandomFieldSource src(505);
  for (int i = 0; i < kDraws; ++i) {
    auto g = small_grid(1 + i % 3);
    ModelParams m;
    m.n = g->dim();
    m.p = src.uniform(1.0, 4.0);
    m.mu = src.uniform(0.1, 2.0);
    m.lambda = i % 2 ? 1 : -1;
    const ComplexField u0(g, 0.2 * src.complex_field(g).values());
    const RealField v0(g, 0.2 * src.real_field(g).values());
    const double m0 = mass(u0);
    StepperConfig c;
    c.dt = 0.02;
    c.horizon = 0.1;
    march(u0, v0, c, m, [&](double, const ComplexField& u, const RealField&) {
      CHECK(std::abs(mass(u) - m0) <= 1e-10 * m0);
    });
  }
}

TEST_CASE("generated data are finite and zero amplitude gives zero") {
  RandomFieldSource src(606);
  for (int i = 0; i < kDraws; ++i) {
    const int n = 1 + i % 3;
    auto g = make_grid(n, 8.0, n == 3 ? 16 : 64);
    ModelParams m;
    m.n = n;
    m.p = n == 1 ? 3.0 : (n == 2 ? 2.0 : 1.5);
    DataRecipe r;
    r.kind = DataKind::homogeneous;
    r.amplitude = src.uniform(0.0, 2.0);
    r.homogeneous.degree = static_cast<int>(src.uniform(0, n == 1 ? 2 : 3));
    r.homogeneous.r_min = src.uniform(g->dx(), 1.0);
    r.homogeneous.r_out = src.uniform(r.homogeneous.r_min + 0.5, 4.0);
    r.homogeneous.mollified = i % 4 == 0;
    const ComplexField u = make_u0(r, g, m);
    const RealField v = make_v0(r, g, m);
    CHECK(u.values().allFinite());
    CHECK(v.values().allFinite());
    CHECK(make_u0(r.scaled(0.0), g, m).values().abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("identical data give a vanishing difference") {
  auto g = make_grid(2, 16.0, 64);
  ModelParams m;
  StabilityOptions o;
  o.horizon = 4.0;
  o.samples = 4;
  DataRecipe u;
  u.kind = DataKind::gaussian;
  u.amplitude = 0.1;
  const auto rep = stability_experiment(u, DataRecipe{}, DataRecipe{}, DataRecipe{}, 0.0, g, m, o);
  for (double d : rep.combined) CHECK(d == 0.0);
  CHECK(rep.verdict == StabilityVerdict::vanishing);
}

TEST_CASE("uncoupled decay experiment reproduces the dispersive probe") {
  auto g = make_grid(2, 64.0, 256);
  ModelParams m;
  DecayOptions o;
  o.horizon = 10.0;
  o.t_start = 1.0;
  o.fit_t_min = 1.0;
  o.samples = 10;
  o.coupling = false;
  o.norm = NormKind::strong;
  o.margin_min = 0.0;
  DataRecipe u;
  u.kind = DataKind::gaussian;
  u.amplitude = 1.0;
  u.width = 1.0;
  const auto ex = theorem1_decay_experiment(u, DataRecipe{}, g, m, o);
  std::vector<double> times;
  for (const auto& s : ex.samples) times.push_back(s.t);
  const auto probe = dispersive_probe(Propagator(g), make_u0(u, g, m), m, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(ex.samples[k].u_strong == doctest::Approx(probe.norms[k]).epsilon(0.01));
}

TEST_CASE("converged Picard iterate is a fixed point") {
  auto g = make_grid(2, 16.0, 64);
  ModelParams m;
  const ComplexField u0 = make_schwartz(SchwartzKind::gaussian, 0.1, 1.5, {}, g);
  const RealField v0(g, 0.05 * make_schwartz(SchwartzKind::gaussian, 1.0, 2.0, {}, g).values().real());
  PicardOptions o;
  o.tol = 1e-9;
  const auto mesh = graded_mesh(2.0, 16);
  const auto res = picard_iterate(u0, v0, mesh, m, o);
  REQUIRE(res.status == PicardStatus::converged);
  const auto& tr = res.trajectory;
  const auto u1 = apply_phi1(tr.u, tr.v, u0, mesh, m);
  const auto v1 = apply_phi2(tr.u, v0, mesh, m);
  const auto e = derive_exponents(m);
  double d = 0.0;
  for (std::size_t j = 1; j < mesh.size(); ++j) {
    d = std::max(d, std::pow(mesh[j], e.alpha) *
                        weak_quasi_norm(ComplexField(g, u1[j].values() - tr.u[j].values()), m.p + 2.0));
    d = std::max(d, std::pow(mesh[j], e.beta) *
                        weak_quasi_norm(RealField(g, v1[j].values() - tr.v[j].values()), (m.p + 2.0) / m.p));
  }
  CHECK(d < 2.0 * o.tol);
  const double m0 = mass(u0);
  CHECK(std::abs(mass(tr.u.back()) - m0) / m0 < 1e-3);
}
