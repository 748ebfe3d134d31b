#include "sdlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "sdlab/lorentz.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/split_step.hpp"

namespace sdlab {

namespace {

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values, double target_exponent) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
  if (times.size() < 8) throw std::invalid_argument("fit_decay: need at least 8 samples");
  const std::size_t n = times.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("fit_decay: nonpositive time at index " + std::to_string(i));
    if (!(values[i] > 0.0)) throw std::invalid_argument("fit_decay: nonpositive norm at index " + std::to_string(i));
    x[i] = std::log(times[i]);
    y[i] = std::log(values[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_decay: all sample times coincide");
  DecayFit fit;
  fit.times = times;
  fit.values = values;
  fit.t_lo = *std::min_element(times.begin(), times.end());
  fit.t_hi = *std::max_element(times.begin(), times.end());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.target_exponent = target_exponent;
  fit.relative_error = target_exponent != 0.0 ? std::abs(fit.slope - target_exponent) / std::abs(target_exponent)
                                              : std::abs(fit.slope);
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_spaced: need 0 < lo < hi, count >= 2");
  std::vector<double> t(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
  t.front() = lo;
  t.back() = hi;
  return t;
}

double spectral_radius(const ComplexField& u, double quantile) {
  if (!(quantile > 0.0) || quantile > 1.0) throw std::invalid_argument("spectral_radius: quantile in (0, 1]");
  const Grid& g = u.grid();
  const ComplexArray uhat = g.forward(u.values());
  std::vector<std::pair<double, double>> rw(static_cast<std::size_t>(g.size()));
  double total = 0.0;
  for (Index j = 0; j < g.size(); ++j) {
    rw[j] = {g.wavenumber_squared()[j], std::norm(uhat[j])};
    total += rw[j].second;
  }
  if (total == 0.0) return 0.0;
  std::sort(rw.begin(), rw.end());
  double acc = 0.0;
  for (const auto& [k2, w] : rw) {
    acc += w;
    if (acc >= quantile * total) return std::sqrt(k2);
  }
  return std::sqrt(rw.back().first);
}

double no_wrap_margin(const ComplexField& u0, double t, double quantile) {
  const double xi = spectral_radius(u0, quantile);
  if (xi == 0.0 || t <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * u0.grid().half_length() / (xi * t);
}

const char* to_string(NormKind k) { return k == NormKind::quasi ? "quasi" : "strong"; }

const char* to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::pass: return "PASS";
    case DecayVerdict::fail: return "FAIL";
    case DecayVerdict::trend_pass: return "TREND_PASS";
    case DecayVerdict::trend_fail: return "TREND_FAIL";
    case DecayVerdict::degenerate_pass: return "DEGENERATE_PASS";
  }
  return "UNKNOWN";
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::vanishing: return "VANISHING";
    case StabilityVerdict::persistent: return "PERSISTENT";
    case StabilityVerdict::mixed: return "MIXED";
  }
  return "UNKNOWN";
}

DecayExperiment theorem1_decay_experiment(const DataRecipe& u_recipe, const DataRecipe& v_recipe, const GridPtr& grid,
                                          const ModelParams& params, const DecayOptions& options) {
  validate(params);
  const Admissibility adm = is_admissible(params);
  if (!adm.admissible) throw std::invalid_argument("decay experiment: inadmissible parameters: " + adm.reason);
  DecayExperiment ex;
  ex.exponents = derive_exponents(params);
  const ComplexField u0 = make_u0(u_recipe, grid, params);
  const RealField v0 = make_v0(v_recipe, grid, params);
  const double ru = params.p + 2.0;
  const double rv = (params.p + 2.0) / params.p;

  const std::vector<double> times = log_spaced(options.t_start, options.horizon, options.samples);
  StepperConfig cfg;
  cfg.dt = options.dt;
  cfg.horizon = options.horizon;
  cfg.output_times = times;
  cfg.coupling = options.coupling;
  const double xi_q = spectral_radius(u0, options.spectral_quantile);
  std::map<double, DecaySample> by_time;
  march(u0, v0, cfg, params, [&](double t, const ComplexField& u, const RealField& v) {
    if (t <= 0.0) return;
    DecaySample s{};
    s.t = t;
    s.margin = xi_q > 0.0 ? 0.5 * grid->half_length() / (xi_q * t) : std::numeric_limits<double>::infinity();
    const WeakNorms wu = weak_norms(u, ru);
    const WeakNorms wv = weak_norms(v, rv);
    s.u_quasi = wu.quasi;
    s.u_full = wu.full;
    s.u_strong = strong_norm(u, ru);
    s.v_quasi = wv.quasi;
    s.v_full = wv.full;
    s.v_strong = strong_norm(v, rv);
    s.mass = mass(u);
    by_time[t] = s;
  });
  for (double t : times) {
    auto it = by_time.find(t);
    if (it == by_time.end()) throw std::logic_error("decay experiment: missing sample");
    ex.samples.push_back(it->second);
  }

  const bool strong = options.norm == NormKind::strong;
  auto u_of = [&](const DecaySample& s) { return strong ? s.u_strong : s.u_quasi; };
  auto v_of = [&](const DecaySample& s) { return strong ? s.v_strong : s.v_quasi; };
  const bool u_zero = std::all_of(ex.samples.begin(), ex.samples.end(), [&](const auto& s) { return u_of(s) == 0.0; });
  const bool v_zero = std::all_of(ex.samples.begin(), ex.samples.end(), [&](const auto& s) { return v_of(s) == 0.0; });
  if (u_zero && v_zero) {
    ex.verdict = DecayVerdict::degenerate_pass;
    ex.detail = "all norms vanish identically";
    return ex;
  }

  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < ex.samples.size(); ++i) {
    const auto& s = ex.samples[i];
    if (s.t >= options.fit_t_min && s.margin >= options.margin_min) window.push_back(i);
  }
  // The admissible window is contiguous because margin decreases in t.
  if (!window.empty()) {
    ex.window_begin = window.front();
    ex.window_end = window.back() + 1;
  }
  std::vector<double> wt, wu_vals, wv_vals;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i : window) {
    wt.push_back(ex.samples[i].t);
    wu_vals.push_back(u_of(ex.samples[i]));
    wv_vals.push_back(v_of(ex.samples[i]));
    min_margin = std::min(min_margin, ex.samples[i].margin);
  }
  if (!window.empty() && min_margin < options.caveat_margin)
    ex.caveat = fmt("no-wrap margin drops to %.3g (< 2) inside the fit window", min_margin);

  const bool decade = wt.size() >= 8 && wt.back() >= 10.0 * wt.front();
  if (!decade) {
    ex.downgraded = true;
    auto non_increasing = [](const std::vector<double>& y) {
      for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[i - 1]) return false;
      return true;
    };
    const bool ok = wt.size() >= 2 && (u_zero || non_increasing(wu_vals)) && (v_zero || non_increasing(wv_vals));
    ex.verdict = ok ? DecayVerdict::trend_pass : DecayVerdict::trend_fail;
    ex.detail = "fit window below one decade (" + std::to_string(wt.size()) +
                " samples); downgraded to a monotone-decrease trend test";
    return ex;
  }

  bool ok = true;
  std::string detail;
  if (!u_zero) {
    ex.fit_u = fit_decay(wt, wu_vals, -ex.exponents.alpha);
    ok = ok && ex.fit_u->relative_error <= options.tolerance && ex.fit_u->r2 >= options.min_r2;
    detail += fmt2("u slope %.4f (target %.4f)", ex.fit_u->slope, -ex.exponents.alpha);
    detail += fmt(", R2 %.4f", ex.fit_u->r2);
  }
  if (!v_zero) {
    ex.fit_v = fit_decay(wt, wv_vals, -ex.exponents.beta);
    ok = ok && ex.fit_v->relative_error <= options.tolerance && ex.fit_v->r2 >= options.min_r2;
    if (!detail.empty()) detail += "; ";
    detail += fmt2("v slope %.4f (target %.4f)", ex.fit_v->slope, -ex.exponents.beta);
    detail += fmt(", R2 %.4f", ex.fit_v->r2);
  }
  detail += fmt2("; window [%.4g, %.4g]", wt.front(), wt.back());
  ex.detail = detail;
  ex.verdict = ok ? DecayVerdict::pass : DecayVerdict::fail;
  return ex;
}

StabilityVerdict classify_stability(const std::vector<double>& combined, const std::vector<double>& linear,
                                    double vanish_factor, double persist_fraction, std::string* detail) {
  if (combined.empty() || linear.empty() || combined.size() != linear.size())
    throw std::invalid_argument("classify_stability: series must be non-empty and equally long");
  auto vanishes = [&](const std::vector<double>& s) { return s.back() <= vanish_factor * s.front(); };
  auto persists = [&](const std::vector<double>& s) {
    if (s.front() <= 0.0) return false;
    return std::all_of(s.begin(), s.end(), [&](double x) { return x >= persist_fraction * s.front(); });
  };
  const bool dv = vanishes(combined), lv = vanishes(linear);
  const bool dp = persists(combined), lp = persists(linear);
  if (detail) {
    auto ratio = [](const std::vector<double>& s) { return s.front() > 0.0 ? s.back() / s.front() : 0.0; };
    *detail = fmt2("difference ratio end/start %.4g, linear ratio %.4g", ratio(combined), ratio(linear));
  }
  if (dv && lv) return StabilityVerdict::vanishing;
  if (dp && lp) return StabilityVerdict::persistent;
  return StabilityVerdict::mixed;
}

StabilityReport stability_experiment(const DataRecipe& base_u, const DataRecipe& base_v, const DataRecipe& pert_u,
                                     const DataRecipe& pert_v, double h, const GridPtr& grid,
                                     const ModelParams& params, const StabilityOptions& options) {
  validate(params);
  validate_weight_shift(params, h);
  const ScalingExponents e = derive_exponents(params);
  const ComplexField u0 = make_u0(base_u, grid, params);
  const RealField v0 = make_v0(base_v, grid, params);
  const ComplexField du0 = make_u0(pert_u, grid, params);
  const RealField dv0 = make_v0(pert_v, grid, params);
  const ComplexField u0p(grid, u0.values() + du0.values());
  const RealField v0p(grid, v0.values() + dv0.values());

  StabilityReport rep;
  rep.h = h;
  rep.times = log_spaced(options.t_ref, options.horizon, options.samples);
  StepperConfig cfg;
  cfg.dt = options.dt;
  cfg.horizon = options.horizon;
  cfg.output_times = rep.times;

  const std::size_t ns = rep.times.size();
  auto run = [&](const ComplexField& a, const RealField& b, std::vector<ComplexArray>& us, std::vector<RealArray>& vs) {
    us.assign(ns, ComplexArray());
    vs.assign(ns, RealArray());
    march(a, b, cfg, params, [&](double t, const ComplexField& u, const RealField& v) {
      const auto it = std::find(rep.times.begin(), rep.times.end(), t);
      if (it == rep.times.end()) return;
      const auto k = static_cast<std::size_t>(it - rep.times.begin());
      us[k] = u.values();
      vs[k] = v.values();
    });
  };
  std::vector<ComplexArray> ua, ub;
  std::vector<RealArray> va, vb;
  if (options.workers >= 2) {
    std::exception_ptr err;
    std::thread th([&] {
      try {
        run(u0p, v0p, ub, vb);
      } catch (...) {
        err = std::current_exception();
      }
    });
    run(u0, v0, ua, va);
    th.join();
    if (err) std::rethrow_exception(err);
  } else {
    run(u0, v0, ua, va);
    run(u0p, v0p, ub, vb);
  }

  const double ru = params.p + 2.0;
  const double rv = (params.p + 2.0) / params.p;
  const double cell = grid->cell_measure();
  const bool strong = options.norm == NormKind::strong;
  auto measure = [&](const auto& arr, double r) {
    return strong ? strong_norm(arr, cell, r) : weak_quasi_norm(arr, cell, r);
  };
  const Propagator prop(grid);
  const ComplexArray dhat = grid->forward(u0.values() - u0p.values());
  for (std::size_t k = 0; k < ns; ++k) {
    const double t = rep.times[k];
    const double wu = std::pow(t, e.alpha + h);
    const double wv = std::pow(t, e.beta + h);
    rep.diff_u.push_back(wu * measure((ua[k] - ub[k]).eval(), ru));
    rep.diff_v.push_back(wv * measure((va[k] - vb[k]).eval(), rv));
    rep.combined.push_back(std::max(rep.diff_u.back(), rep.diff_v.back()));
    rep.linear.push_back(wu * measure(grid->inverse(prop.apply_spectral(dhat, t)), ru));
  }
  rep.verdict = classify_stability(rep.combined, rep.linear, options.vanish_factor, options.persist_fraction,
                                   &rep.detail);
  return rep;
}

ConservationReport conservation_report(const Trajectory& traj, const ModelParams& params) {
  traj.check();
  ConservationReport rep;
  rep.times = traj.times;
  for (const auto& u : traj.u) rep.mass.push_back(mass(u));
  if (!rep.mass.empty() && rep.mass.front() > 0.0)
    for (double m : rep.mass)
      rep.max_relative_drift = std::max(rep.max_relative_drift, std::abs(m - rep.mass.front()) / rep.mass.front());
  if (params.p == 2.0 && traj.size() >= 3) {
    try {
      const PseudoHamiltonianSeries ph = pseudo_hamiltonian_check(traj, params);
      rep.has_pseudo_hamiltonian = true;
      rep.ph_times = ph.times;
      rep.ph_residual = ph.residual;
      rep.max_ph_residual = ph.max_residual;
    } catch (const std::invalid_argument&) {
      // Non-uniform snapshot spacing: mass only.
    }
  }
  return rep;
}

}  // namespace sdlab
