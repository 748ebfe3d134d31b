#include "sdlab/picard.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdlab/debye.hpp"
#include "sdlab/lorentz.hpp"
#include "sdlab/parallel.hpp"

namespace sdlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_mesh(const std::vector<double>& mesh) {
  if (mesh.size() < 2 || mesh.front() != 0.0) throw std::invalid_argument("mesh must start at 0 with >= 1 cell");
  for (std::size_t k = 1; k < mesh.size(); ++k)
    if (!(mesh[k] > mesh[k - 1])) throw std::invalid_argument("mesh must be strictly increasing");
}

struct NodeNorms {
  double quasi = 0.0;
  double full = 0.0;
  double strong = 0.0;
};

template <typename Derived>
NodeNorms node_norms(const Eigen::ArrayBase<Derived>& f, double cell, double r) {
  const auto arr = f.derived().eval();
  const WeakNorms w = weak_norms(decreasing_rearrangement(arr, cell), r);
  return {w.quasi, w.full, strong_norm(arr, cell, r)};
}

struct Radii {
  double U = 0.0, V = 0.0, Uq = 0.0, Vq = 0.0, Us = 0.0, Vs = 0.0;
};

void fold(Radii& r, const NodeNorms& nu, const NodeNorms& nv, double wu, double wv) {
  r.U = std::max(r.U, wu * nu.full);
  r.Uq = std::max(r.Uq, wu * nu.quasi);
  r.Us = std::max(r.Us, wu * nu.strong);
  r.V = std::max(r.V, wv * nv.full);
  r.Vq = std::max(r.Vq, wv * nv.quasi);
  r.Vs = std::max(r.Vs, wv * nv.strong);
}

double safe_div(double num, double den) { return den > 0.0 ? num / den : kNaN; }

}  // namespace

std::vector<double> graded_mesh(double horizon, int cells, double grading) {
  if (!(horizon > 0.0)) throw std::invalid_argument("graded_mesh: horizon must be > 0");
  if (cells < 1) throw std::invalid_argument("graded_mesh: need at least one cell");
  if (!(grading >= 1.0)) throw std::invalid_argument("graded_mesh: grading must be >= 1");
  std::vector<double> mesh(static_cast<std::size_t>(cells) + 1);
  for (int j = 0; j <= cells; ++j)
    mesh[j] = horizon * std::pow(static_cast<double>(j) / cells, grading);
  mesh.back() = horizon;
  return mesh;
}

const char* to_string(FirstCellRule rule) { return rule == FirstCellRule::power_law ? "power_law" : "trapezoid"; }
const char* to_string(WeakMetric metric) { return metric == WeakMetric::quasi ? "quasi" : "full"; }

const char* to_string(PicardStatus status) {
  switch (status) {
    case PicardStatus::converged: return "converged";
    case PicardStatus::max_iterations: return "max_iterations";
    case PicardStatus::non_contraction: return "non_contraction";
    case PicardStatus::diverged: return "diverged";
  }
  return "unknown";
}

std::vector<ComplexField> apply_phi1(const std::vector<ComplexField>& u_traj, const std::vector<RealField>& v_traj,
                                     const ComplexField& u0, const std::vector<double>& mesh,
                                     const ModelParams& params, FirstCellRule rule) {
  check_mesh(mesh);
  if (u_traj.size() != mesh.size() || v_traj.size() != mesh.size())
    throw std::invalid_argument("apply_phi1: trajectory does not match mesh");
  const ScalingExponents e = derive_exponents(params);
  const double sing = e.alpha + e.beta;
  if (rule == FirstCellRule::power_law && !beta_integral_finite(e.dispersive_exp, sing))
    throw std::invalid_argument("apply_phi1: first-cell weight diverges (alpha + beta >= 1)");

  const Grid& g = u0.grid();
  const Propagator prop(u0.grid_ptr());
  const ComplexArray u0hat = g.forward(u0.values());
  const Complex minus_i(0.0, -1.0);

  // Interaction picture: G(s) = S(-s) FFT(u v)(s), I_j = int_0^{t_j} G.
  auto integrand = [&](std::size_t k) {
    require_same_grid(u0, u_traj[k], "apply_phi1");
    require_same_grid(u0, v_traj[k], "apply_phi1");
    const ComplexArray uv = u_traj[k].values() * v_traj[k].values().cast<Complex>();
    return prop.apply_spectral(g.forward(uv), -mesh[k]);
  };

  std::vector<ComplexField> out;
  out.reserve(mesh.size());
  out.push_back(u0);
  ComplexArray acc = ComplexArray::Zero(g.size());
  ComplexArray g_prev = integrand(0);
  for (std::size_t j = 1; j < mesh.size(); ++j) {
    const ComplexArray g_cur = integrand(j);
    const double h = mesh[j] - mesh[j - 1];
    if (j == 1 && rule == FirstCellRule::power_law)
      acc = (h / (1.0 - sing)) * g_cur;
    else
      acc += (0.5 * h) * (g_prev + g_cur);
    const ComplexArray hat = prop.apply_spectral(u0hat + minus_i * acc, mesh[j]);
    out.emplace_back(u0.grid_ptr(), g.inverse(hat));
    g_prev = g_cur;
  }
  return out;
}

std::vector<RealField> apply_phi2(const std::vector<ComplexField>& u_traj, const RealField& v0,
                                  const std::vector<double>& mesh, const ModelParams& params) {
  check_mesh(mesh);
  if (u_traj.size() != mesh.size()) throw std::invalid_argument("apply_phi2: trajectory does not match mesh");
  const DebyeKernelQuadrature quad(mesh, params.mu);
  std::vector<RealArray> forcing;
  forcing.reserve(mesh.size());
  for (const auto& u : u_traj) {
    require_same_grid(v0, u, "apply_phi2");
    forcing.push_back(modulus_power(u.values(), params.p));
  }
  std::vector<RealField> out;
  out.reserve(mesh.size());
  for (std::size_t j = 0; j < mesh.size(); ++j)
    out.emplace_back(v0.grid_ptr(), quad.evaluate(v0.values(), forcing, j, params.lambda));
  return out;
}

std::vector<double> ContractionDiagnostics::ratios() const {
  std::vector<double> r;
  for (const auto& it : iterations)
    if (!std::isnan(it.ratio)) r.push_back(it.ratio);
  return r;
}

double ContractionDiagnostics::max_ratio() const {
  double m = 0.0;
  for (double r : ratios()) m = std::max(m, r);
  return m;
}

PicardResult picard_iterate(const ComplexField& u0, const RealField& v0, const std::vector<double>& mesh,
                            const ModelParams& params, const PicardOptions& options) {
  validate(params);
  const Admissibility adm = is_admissible(params);
  if (!adm.admissible) throw std::invalid_argument("picard_iterate: inadmissible parameters: " + adm.reason);
  if (!(options.tol > 0.0)) throw std::invalid_argument("picard_iterate: tol must be > 0");
  if (options.max_iters < 1) throw std::invalid_argument("picard_iterate: max_iters must be >= 1");
  check_mesh(mesh);
  require_same_grid(u0, v0, "picard_iterate");

  const ScalingExponents e = derive_exponents(params);
  const Grid& g = u0.grid();
  const double cell = g.cell_measure();
  const double ru = params.p + 2.0;
  const double rv = (params.p + 2.0) / params.p;
  const std::size_t nodes = mesh.size();
  std::vector<double> wu(nodes), wv(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    wu[j] = std::pow(mesh[j], e.alpha);
    wv[j] = std::pow(mesh[j], e.beta);
  }

  const Propagator prop(u0.grid_ptr());
  const ComplexArray u0hat = g.forward(u0.values());
  std::vector<ComplexField> free_u;
  std::vector<RealField> free_v;
  for (std::size_t j = 0; j < nodes; ++j) {
    free_u.emplace_back(u0.grid_ptr(), g.inverse(prop.apply_spectral(u0hat, mesh[j])));
    free_v.emplace_back(v0.grid_ptr(), std::exp(-mesh[j] / params.mu) * v0.values());
  }

  auto radii_of = [&](const std::vector<ComplexField>& us, const std::vector<RealField>& vs) {
    std::vector<NodeNorms> nu(nodes), nv(nodes);
    parallel_for(nodes - 1, options.workers, [&](std::size_t i) {
      const std::size_t j = i + 1;
      nu[j] = node_norms(us[j].values(), cell, ru);
      nv[j] = node_norms(vs[j].values(), cell, rv);
    });
    Radii r;
    for (std::size_t j = 1; j < nodes; ++j) fold(r, nu[j], nv[j], wu[j], wv[j]);
    return r;
  };

  PicardResult result;
  std::vector<ComplexField> u_cur = free_u;
  std::vector<RealField> v_cur = free_v;
  Radii cur = radii_of(u_cur, v_cur);
  result.diagnostics.data_norm_u = cur.Uq;
  result.diagnostics.data_norm_v = weak_quasi_norm(v0, rv);

  double prev_d = kNaN;
  int run = 0;
  result.status = PicardStatus::max_iterations;
  for (int m = 1; m <= options.max_iters; ++m) {
    IterationRecord rec;
    rec.m = m;
    rec.U = cur.U;
    rec.V = cur.V;
    rec.U_quasi = cur.Uq;
    rec.V_quasi = cur.Vq;
    rec.U_strong = cur.Us;
    rec.V_strong = cur.Vs;

    std::vector<ComplexField> u_next;
    std::vector<RealField> v_next;
    try {
      u_next = apply_phi1(u_cur, v_cur, u0, mesh, params, options.first_cell);
      v_next = apply_phi2(u_cur, v0, mesh, params);
    } catch (const std::domain_error&) {
      rec.distance = rec.distance_u = rec.distance_v = std::numeric_limits<double>::infinity();
      rec.ratio = std::numeric_limits<double>::infinity();
      rec.K1 = rec.K2 = rec.K1_strong = rec.K2_strong = kNaN;
      result.diagnostics.iterations.push_back(rec);
      result.status = PicardStatus::diverged;
      result.message = "iterate " + std::to_string(m + 1) + " became non-finite";
      break;
    }

    struct NodeStats {
      NodeNorms du, dv, n1, n2, un, vn;
    };
    std::vector<NodeStats> stats(nodes);
    parallel_for(nodes - 1, options.workers, [&](std::size_t i) {
      const std::size_t j = i + 1;
      NodeStats& s = stats[j];
      s.du = node_norms(u_next[j].values() - u_cur[j].values(), cell, ru);
      s.dv = node_norms(v_next[j].values() - v_cur[j].values(), cell, rv);
      s.n1 = node_norms(u_next[j].values() - free_u[j].values(), cell, ru);
      s.n2 = node_norms(v_next[j].values() - free_v[j].values(), cell, rv);
      s.un = node_norms(u_next[j].values(), cell, ru);
      s.vn = node_norms(v_next[j].values(), cell, rv);
    });
    Radii next;
    const bool quasi = options.metric == WeakMetric::quasi;
    for (std::size_t j = 1; j < nodes; ++j) {
      const NodeStats& s = stats[j];
      rec.distance_u = std::max(rec.distance_u, wu[j] * (quasi ? s.du.quasi : s.du.full));
      rec.distance_v = std::max(rec.distance_v, wv[j] * (quasi ? s.dv.quasi : s.dv.full));
      rec.N1 = std::max(rec.N1, wu[j] * s.n1.full);
      rec.N2 = std::max(rec.N2, wv[j] * s.n2.full);
      rec.N1_strong = std::max(rec.N1_strong, wu[j] * s.n1.strong);
      rec.N2_strong = std::max(rec.N2_strong, wv[j] * s.n2.strong);
      fold(next, s.un, s.vn, wu[j], wv[j]);
    }
    rec.distance = std::max(rec.distance_u, rec.distance_v);
    rec.ratio = prev_d > 0.0 ? rec.distance / prev_d : kNaN;
    rec.U_next = next.U;
    rec.V_next = next.V;
    rec.U_next_strong = next.Us;
    rec.V_next_strong = next.Vs;
    rec.K1 = safe_div(rec.N1, rec.U * rec.V);
    rec.K2 = safe_div(rec.N2, std::pow(rec.U, params.p));
    rec.K1_strong = safe_div(rec.N1_strong, rec.U_strong * rec.V_strong);
    rec.K2_strong = safe_div(rec.N2_strong, std::pow(rec.U_strong, params.p));
    result.diagnostics.iterations.push_back(rec);

    u_cur = std::move(u_next);
    v_cur = std::move(v_next);
    cur = next;

    if (rec.distance < options.tol) {
      result.status = PicardStatus::converged;
      break;
    }
    run = (!std::isnan(rec.ratio) && rec.ratio >= 1.0) ? run + 1 : 0;
    if (run >= options.non_contraction_run) {
      result.status = PicardStatus::non_contraction;
      result.message = "ratio >= 1 for " + std::to_string(run) + " consecutive iterations";
      break;
    }
    prev_d = rec.distance;
  }
  if (result.status == PicardStatus::max_iterations)
    result.message = "no convergence within " + std::to_string(options.max_iters) + " iterations";

  result.trajectory.times = mesh;
  result.trajectory.u = std::move(u_cur);
  result.trajectory.v = std::move(v_cur);
  return result;
}

RecurrenceReport recurrence_tracker(const ContractionDiagnostics& diag, const ModelParams& params, double slack) {
  RecurrenceReport rep;
  const auto& its = diag.iterations;
  if (its.empty()) return rep;
  auto kmax = [&](auto member) {
    double k = kNaN;
    for (const auto& it : its) {
      const double x = it.*member;
      if (std::isfinite(x)) k = std::isnan(k) ? x : std::max(k, x);
    }
    return k;
  };
  rep.K1 = kmax(&IterationRecord::K1);
  rep.K2 = kmax(&IterationRecord::K2);
  rep.K1_strong = kmax(&IterationRecord::K1_strong);
  rep.K2_strong = kmax(&IterationRecord::K2_strong);
  rep.applicable = !std::isnan(rep.K1) || !std::isnan(rep.K2);

  const double U1 = its.front().U, V1 = its.front().V;
  const double U1s = its.front().U_strong, V1s = its.front().V_strong;
  auto term = [](double k, double x) { return std::isnan(k) ? 0.0 : k * x; };
  auto ratio = [](double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    return rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  };
  for (const auto& it : its) {
    if (!std::isfinite(it.distance)) continue;
    rep.max_residual_u = std::max(rep.max_residual_u, ratio(it.U_next, U1 + term(rep.K1, it.U * it.V)));
    rep.max_residual_v = std::max(rep.max_residual_v, ratio(it.V_next, V1 + term(rep.K2, std::pow(it.U, params.p))));
    rep.max_residual_u_strong = std::max(
        rep.max_residual_u_strong, ratio(it.U_next_strong, U1s + term(rep.K1_strong, it.U_strong * it.V_strong)));
    rep.max_residual_v_strong = std::max(
        rep.max_residual_v_strong, ratio(it.V_next_strong, V1s + term(rep.K2_strong, std::pow(it.U_strong, params.p))));
  }
  rep.holds = rep.max_residual_u <= 1.0 + slack && rep.max_residual_v <= 1.0 + slack;
  rep.holds_strong = rep.max_residual_u_strong <= 1.0 + slack && rep.max_residual_v_strong <= 1.0 + slack;
  return rep;
}

double lipschitz_violation(const ComplexField& u, const ComplexField& w, double p) {
  require_same_grid(u, w, "lipschitz_violation");
  const RealArray au = u.values().abs();
  const RealArray aw = w.values().abs();
  const RealArray lhs = (au.pow(p) - aw.pow(p)).abs();
  const RealArray rhs = p * (u.values() - w.values()).abs() * (au.pow(p - 1.0) + aw.pow(p - 1.0));
  return (lhs - rhs).maxCoeff();
}

}  // namespace sdlab
