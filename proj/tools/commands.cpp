#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "run_config.hpp"
#include "sdlab/debye.hpp"
#include "sdlab/diagnostics.hpp"
#include "sdlab/field_io.hpp"
#include "sdlab/lorentz.hpp"
#include "sdlab/parallel.hpp"
#include "sdlab/picard.hpp"
#include "sdlab/propagator.hpp"
#include "sdlab/random_fields.hpp"
#include "sdlab/report.hpp"
#include "sdlab/split_step.hpp"

namespace sdlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolName = "sdlab";

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

// Output directory with a manifest of everything written into it.
class RunDir {
 public:
  RunDir(const fs::path& path, std::string command) : path_(path), command_(std::move(command)) {
    fs::create_directories(path_);
  }

  static RunDir create(const std::string& root, const std::string& command) {
    const fs::path base = fs::path(root) / (command + "-" + utc_stamp());
    fs::path p = base;
    for (int k = 2; fs::exists(p); ++k) p = base.string() + "-" + std::to_string(k);
    return RunDir(p, command);
  }

  RunDir member(const std::string& name) const { return RunDir(path_ / name, command_); }

  const fs::path& path() const { return path_; }

  void text(const std::string& name, const std::string& content) {
    write_text_file((path_ / name).string(), content);
    files_.push_back(name);
  }
  void csv(const std::string& name, const CsvTable& t) { text(name, t.str()); }
  void svg(const std::string& name, const SvgPlot& p) { text(name, p.render()); }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  template <typename F>
  void field(const std::string& name, const F& f) {
    write_field_binary((path_ / name).string(), f);
    files_.push_back(name);
  }
  void adopt(const std::string& name) { files_.push_back(name); }

  void finish() {
    std::sort(files_.begin(), files_.end());
    json m;
    m["command"] = command_;
    m["files"] = json::array();
    for (const auto& f : files_) {
      json e;
      e["name"] = f;
      e["bytes"] = static_cast<std::uint64_t>(fs::file_size(path_ / f));
      m["files"].push_back(e);
    }
    write_text_file((path_ / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  fs::path path_;
  std::string command_;
  std::vector<std::string> files_;
};

json params_json(const ModelParams& p) {
  const ScalingExponents e = derive_exponents(p);
  const Admissibility a = is_admissible(p);
  json j;
  j["n"] = p.n;
  j["p"] = p.p;
  j["mu"] = p.mu;
  j["lambda"] = p.lambda;
  j["alpha"] = e.alpha;
  j["beta"] = e.beta;
  j["p0"] = e.p0;
  j["dispersive_exp"] = e.dispersive_exp;
  j["h_max"] = e.h_max;
  j["admissible"] = a.admissible;
  j["admissibility_reason"] = a.reason;
  return j;
}

json metadata(const RunConfig& cfg, const std::string& command) {
  json j;
  j["tool"] = kToolName;
  j["command"] = command;
  j["params"] = params_json(cfg.model);
  j["grid"] = {{"n", cfg.model.n}, {"half_length", cfg.half_length}, {"points", cfg.points},
               {"dx", 2.0 * cfg.half_length / static_cast<double>(cfg.points)}};
  j["seed"] = cfg.seed;
  j["config"] = echo_ini(cfg);
  return j;
}

void start_run(RunDir& dir, const RunConfig& cfg) { dir.text("config.ini", echo_ini(cfg)); }

GridPtr grid_of(const RunConfig& cfg) { return make_grid(cfg.model.n, cfg.half_length, cfg.points); }

PicardOptions picard_options(const RunConfig& cfg, int workers) {
  PicardOptions o;
  o.max_iters = cfg.max_iters;
  o.tol = cfg.tol;
  o.metric = cfg.metric;
  o.first_cell = cfg.first_cell;
  o.workers = workers;
  return o;
}

// ---------------------------------------------------------------- check-params

int cmd_check_params(const RunConfig& cfg, std::ostream& out) {
  const ScalingExponents e = derive_exponents(cfg.model);
  const Admissibility a = is_admissible(cfg.model);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "n = %d, p = %.17g, mu = %.17g, lambda = %+d\n"
                "alpha          = %.17g\n"
                "beta           = %.17g\n"
                "p0             = %.17g\n"
                "h_max          = %.17g\n"
                "dispersive_exp = %.17g\n",
                cfg.model.n, cfg.model.p, cfg.model.mu, cfg.model.lambda, e.alpha, e.beta, e.p0, e.h_max,
                e.dispersive_exp);
  out << buf;
  out << "verdict        = " << (a.admissible ? "admissible" : "inadmissible") << " (" << a.reason << ")\n";
  return a.admissible ? kExitPass : kExitDiagnosed;
}

// ---------------------------------------------------------------- picard

struct PicardRun {
  PicardResult result;
  RecurrenceReport recurrence;
  double mass_drift = 0.0;
};

PicardRun run_picard(const ComplexField& u0, const RealField& v0, const RunConfig& cfg, int workers) {
  PicardRun run;
  const auto mesh = graded_mesh(cfg.horizon, cfg.mesh_cells, cfg.mesh_grading);
  run.result = picard_iterate(u0, v0, mesh, cfg.model, picard_options(cfg, workers));
  run.recurrence = recurrence_tracker(run.result.diagnostics, cfg.model);
  const double m0 = mass(u0);
  if (m0 > 0.0) run.mass_drift = std::abs(mass(run.result.trajectory.u.back()) - m0) / m0;
  return run;
}

json recurrence_json(const RecurrenceReport& r) {
  return {{"applicable", r.applicable},
          {"K1", finite_or_null(r.K1)},
          {"K2", finite_or_null(r.K2)},
          {"max_residual_u", finite_or_null(r.max_residual_u)},
          {"max_residual_v", finite_or_null(r.max_residual_v)},
          {"holds", r.holds},
          {"K1_strong", finite_or_null(r.K1_strong)},
          {"K2_strong", finite_or_null(r.K2_strong)},
          {"max_residual_u_strong", finite_or_null(r.max_residual_u_strong)},
          {"max_residual_v_strong", finite_or_null(r.max_residual_v_strong)},
          {"holds_strong", r.holds_strong}};
}

void write_picard_outputs(RunDir& dir, const RunConfig& cfg, const PicardRun& run, const std::string& command) {
  const auto& d = run.result.diagnostics;
  CsvTable t({"iteration", "d_m", "ratio", "U_m", "V_m", "empirical_K1", "empirical_K2", "d_u", "d_v", "U_m_quasi",
              "V_m_quasi", "U_m_strong", "V_m_strong", "empirical_K1_strong", "empirical_K2_strong"});
  for (const auto& it : d.iterations)
    t.add_row({static_cast<double>(it.m), it.distance, it.ratio, it.U, it.V, it.K1, it.K2, it.distance_u,
               it.distance_v, it.U_quasi, it.V_quasi, it.U_strong, it.V_strong, it.K1_strong, it.K2_strong});
  dir.csv("picard_diagnostics.csv", t);

  SvgPlot plot;
  plot.title = "Picard iterate distances";
  plot.x_label = "iteration m";
  plot.y_label = "d_m";
  plot.log_x = false;
  PlotSeries s{"d_m", {}, {}, "#1f77b4"};
  PlotSeries r{"ratio d_m/d_(m-1)", {}, {}, "#d62728"};
  for (const auto& it : d.iterations) {
    s.x.push_back(it.m);
    s.y.push_back(it.distance);
    if (std::isfinite(it.ratio)) {
      r.x.push_back(it.m);
      r.y.push_back(it.ratio);
    }
  }
  plot.series = {s, r};
  dir.svg("picard_distances.svg", plot);

  json j = metadata(cfg, command);
  json res;
  res["status"] = to_string(run.result.status);
  res["message"] = run.result.message;
  res["iterations"] = d.iterations.size();
  res["ratios"] = vec_json(d.ratios());
  res["max_ratio"] = finite_or_null(d.max_ratio());
  res["data_norm_u"] = d.data_norm_u;
  res["data_norm_v"] = d.data_norm_v;
  res["mass_relative_drift"] = run.mass_drift;
  res["recurrence"] = recurrence_json(run.recurrence);
  res["mesh"] = {{"horizon", cfg.horizon}, {"cells", cfg.mesh_cells}, {"grading", cfg.mesh_grading},
                 {"first_cell", to_string(cfg.first_cell)}, {"metric", to_string(cfg.metric)}};
  j["result"] = res;
  dir.json_file("result.json", j);
  dir.field("u_final.bin", run.result.trajectory.u.back());
  dir.field("v_final.bin", run.result.trajectory.v.back());
}

int cmd_picard(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  auto grid = grid_of(cfg);
  RunDir dir = RunDir::create(g.out, "picard");
  start_run(dir, cfg);

  if (cfg.sweep_amplitudes.empty()) {
    const PicardRun run = run_picard(make_u0(cfg.u0, grid, cfg.model), make_v0(cfg.v0, grid, cfg.model), cfg, g.jobs);
    write_picard_outputs(dir, cfg, run, "picard");
    dir.finish();
    out << "picard: " << to_string(run.result.status) << " after " << run.result.diagnostics.iterations.size()
        << " iterations, max ratio " << format_double(run.result.diagnostics.max_ratio()) << "\n";
    out << "run directory: " << dir.path().string() << "\n";
    return run.result.status == PicardStatus::converged ? kExitPass : kExitDiagnosed;
  }

  const std::size_t count = cfg.sweep_amplitudes.size();
  std::vector<PicardRun> runs(count);
  std::vector<RunConfig> members(count, cfg);
  for (std::size_t i = 0; i < count; ++i) {
    members[i].u0 = cfg.u0.scaled(cfg.sweep_amplitudes[i]);
    members[i].v0 = cfg.v0.scaled(cfg.sweep_amplitudes[i]);
    members[i].sweep_amplitudes.clear();
  }
  parallel_for(count, g.jobs, [&](std::size_t i) {
    runs[i] = run_picard(make_u0(members[i].u0, grid, cfg.model), make_v0(members[i].v0, grid, cfg.model),
                         members[i], 1);
  });
  CsvTable summary({"factor", "amplitude_u", "amplitude_v", "status_code", "iterations", "max_ratio", "last_ratio",
                    "data_norm_u", "data_norm_v"});
  bool all_converged = true;
  SvgPlot plot;
  plot.title = "Contraction ratio against data amplitude";
  plot.x_label = "amplitude factor";
  plot.y_label = "max ratio";
  PlotSeries s{"max d_m/d_(m-1)", {}, {}, "#1f77b4"};
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "member-%02zu", i);
    RunDir sub = dir.member(name);
    start_run(sub, members[i]);
    write_picard_outputs(sub, members[i], runs[i], "picard");
    sub.finish();
    const auto& d = runs[i].result.diagnostics;
    const auto ratios = d.ratios();
    summary.add_row({cfg.sweep_amplitudes[i], members[i].u0.amplitude, members[i].v0.amplitude,
                     static_cast<double>(static_cast<int>(runs[i].result.status)),
                     static_cast<double>(d.iterations.size()), d.max_ratio(),
                     ratios.empty() ? std::nan("") : ratios.back(), d.data_norm_u, d.data_norm_v});
    s.x.push_back(cfg.sweep_amplitudes[i]);
    s.y.push_back(d.max_ratio());
    all_converged = all_converged && runs[i].result.status == PicardStatus::converged;
    out << name << ": factor " << format_double(cfg.sweep_amplitudes[i]) << ", "
        << to_string(runs[i].result.status) << ", max ratio " << format_double(d.max_ratio()) << "\n";
  }
  plot.series = {s};
  dir.csv("sweep.csv", summary);
  dir.svg("sweep.svg", plot);
  json j = metadata(cfg, "picard");
  json members_json = json::array();
  for (std::size_t i = 0; i < count; ++i)
    members_json.push_back({{"factor", cfg.sweep_amplitudes[i]},
                            {"status", to_string(runs[i].result.status)},
                            {"max_ratio", finite_or_null(runs[i].result.diagnostics.max_ratio())}});
  j["result"] = {{"sweep", members_json}, {"all_converged", all_converged},
                 {"status_codes", "0 converged, 1 max_iterations, 2 non_contraction, 3 diverged"}};
  dir.json_file("result.json", j);
  dir.finish();
  out << "run directory: " << dir.path().string() << "\n";
  return all_converged ? kExitPass : kExitDiagnosed;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  if (cfg.solver == SolverKind::picard) {
    RunConfig c = cfg;
    c.sweep_amplitudes.clear();
    return cmd_picard(c, g, out);
  }
  auto grid = grid_of(cfg);
  const ComplexField u0 = make_u0(cfg.u0, grid, cfg.model);
  const RealField v0 = make_v0(cfg.v0, grid, cfg.model);
  RunDir dir = RunDir::create(g.out, "simulate");
  start_run(dir, cfg);
  StepperConfig sc;
  sc.dt = cfg.dt;
  sc.horizon = cfg.horizon;
  sc.stride = cfg.stride;
  sc.coupling = cfg.coupling;

  json j = metadata(cfg, "simulate");
  Trajectory traj;
  try {
    traj = simulate(u0, v0, sc, cfg.model);
  } catch (const BlowUpError& e) {
    j["result"] = {{"status", "blow_up"}, {"message", e.what()}, {"last_finite_time", e.last_finite_time()}};
    dir.json_file("result.json", j);
    dir.finish();
    out << "simulate: blow-up, last finite time " << format_double(e.last_finite_time()) << "\n";
    return kExitDiagnosed;
  }
  const ConservationReport cons = conservation_report(traj, cfg.model);
  const ScalingExponents e = derive_exponents(cfg.model);
  const double ru = cfg.model.p + 2.0, rv = (cfg.model.p + 2.0) / cfg.model.p;

  CsvTable ct({"t", "mass", "mass_relative_drift", "pseudo_hamiltonian_residual"});
  for (std::size_t k = 0; k < cons.times.size(); ++k) {
    double ph = std::nan("");
    if (cons.has_pseudo_hamiltonian && k >= 1 && k + 1 < cons.times.size()) ph = cons.ph_residual[k - 1];
    const double drift = cons.mass.front() > 0 ? std::abs(cons.mass[k] - cons.mass.front()) / cons.mass.front() : 0.0;
    ct.add_row({cons.times[k], cons.mass[k], drift, ph});
  }
  dir.csv("conservation.csv", ct);

  CsvTable nt({"t", "field", "r", "quasi_norm", "full_norm", "strong_norm", "truncation_sensitivity"});
  PlotSeries su{"t^alpha ||u||*", {}, {}, "#1f77b4"};
  PlotSeries sv{"t^beta ||v||*", {}, {}, "#d62728"};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const WeakNormReport ru_rep = weak_norm_report(traj.u[k], ru);
    const WeakNormReport rv_rep = weak_norm_report(traj.v[k], rv);
    nt.add_text_row({format_double(t), "u", format_double(ru), format_double(ru_rep.quasi_norm),
                     format_double(ru_rep.full_norm), format_double(ru_rep.strong_norm),
                     format_double(ru_rep.truncation_sensitivity)});
    nt.add_text_row({format_double(t), "v", format_double(rv), format_double(rv_rep.quasi_norm),
                     format_double(rv_rep.full_norm), format_double(rv_rep.strong_norm),
                     format_double(rv_rep.truncation_sensitivity)});
    if (t > 0) {
      su.x.push_back(t);
      su.y.push_back(std::pow(t, e.alpha) * ru_rep.quasi_norm);
      sv.x.push_back(t);
      sv.y.push_back(std::pow(t, e.beta) * rv_rep.quasi_norm);
    }
  }
  dir.csv("norms.csv", nt);
  SvgPlot plot;
  plot.title = "Weighted weak norms along the split-step run";
  plot.x_label = "t";
  plot.y_label = "weighted quasi-norm";
  plot.series = {su, sv};
  dir.svg("norms.svg", plot);
  dir.field("u_final.bin", traj.u.back());
  dir.field("v_final.bin", traj.v.back());

  bool pass = cons.max_relative_drift < 1e-10;
  json res;
  res["status"] = "completed";
  res["snapshots"] = traj.size();
  res["mass_max_relative_drift"] = cons.max_relative_drift;
  res["pseudo_hamiltonian_max_residual"] =
      cons.has_pseudo_hamiltonian ? json(cons.max_ph_residual) : json(nullptr);
  res["no_wrap_margin_at_horizon"] = finite_or_null(no_wrap_margin(u0, cfg.horizon, cfg.spectral_quantile));

  if (cfg.solver == SolverKind::both) {
    const PicardRun run = run_picard(u0, v0, cfg, g.jobs);
    const ComplexArray diff = run.result.trajectory.u.back().values() - traj.u.back().values();
    const double denom = std::sqrt(traj.u.back().values().abs2().sum());
    const double rel = denom > 0 ? std::sqrt(diff.abs2().sum()) / denom : std::sqrt(diff.abs2().sum());
    RunDir sub = dir.member("picard");
    start_run(sub, cfg);
    write_picard_outputs(sub, cfg, run, "picard");
    sub.finish();
    res["picard_status"] = to_string(run.result.status);
    res["terminal_l2_relative_difference"] = rel;
    pass = pass && run.result.status == PicardStatus::converged && rel <= 1e-3;
    out << "picard vs split-step terminal L2-relative difference " << format_double(rel) << "\n";
  }
  res["verdict"] = pass ? "PASS" : "FAIL";
  j["result"] = res;
  dir.json_file("result.json", j);
  dir.finish();
  out << "simulate: mass drift " << format_double(cons.max_relative_drift) << ", verdict " << (pass ? "PASS" : "FAIL")
      << "\nrun directory: " << dir.path().string() << "\n";
  return pass ? kExitPass : kExitDiagnosed;
}

// ---------------------------------------------------------------- decay

json fit_json(const std::optional<DecayFit>& f) {
  if (!f) return nullptr;
  return {{"t_lo", f->t_lo},         {"t_hi", f->t_hi},
          {"slope", f->slope},       {"intercept", f->intercept},
          {"r2", f->r2},             {"target_exponent", f->target_exponent},
          {"relative_error", f->relative_error}, {"spans_decade", f->spans_decade()}};
}

int cmd_decay(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  auto grid = grid_of(cfg);
  DecayOptions o;
  o.horizon = cfg.horizon;
  o.dt = cfg.dt;
  o.samples = cfg.samples;
  o.t_start = cfg.t_start;
  o.fit_t_min = cfg.fit_t_min;
  o.margin_min = cfg.margin_min;
  o.caveat_margin = cfg.caveat_margin;
  o.spectral_quantile = cfg.spectral_quantile;
  o.norm = cfg.norm;
  o.coupling = cfg.coupling;
  o.tolerance = cfg.tolerance;
  o.min_r2 = cfg.min_r2;
  RunDir dir = RunDir::create(g.out, "decay");
  start_run(dir, cfg);
  json j = metadata(cfg, "decay");
  DecayExperiment ex;
  try {
    ex = theorem1_decay_experiment(cfg.u0, cfg.v0, grid, cfg.model, o);
  } catch (const BlowUpError& e) {
    j["result"] = {{"verdict", "BLOW_UP"}, {"message", e.what()}, {"last_finite_time", e.last_finite_time()}};
    dir.json_file("result.json", j);
    dir.finish();
    out << "decay: blow-up\n";
    return kExitDiagnosed;
  }
  CsvTable t({"t", "no_wrap_margin", "in_fit_window", "u_quasi", "u_full", "u_strong", "v_quasi", "v_full",
              "v_strong", "mass"});
  for (std::size_t i = 0; i < ex.samples.size(); ++i) {
    const auto& s = ex.samples[i];
    const bool in = i >= ex.window_begin && i < ex.window_end;
    t.add_row({s.t, s.margin, in ? 1.0 : 0.0, s.u_quasi, s.u_full, s.u_strong, s.v_quasi, s.v_full, s.v_strong,
               s.mass});
  }
  dir.csv("decay_series.csv", t);

  const bool strong = cfg.norm == NormKind::strong;
  SvgPlot plot;
  plot.title = std::string("Decay of ") + (strong ? "strong" : "weak quasi-") + " norms";
  plot.x_label = "t";
  plot.y_label = "norm";
  PlotSeries su{"||u(t)||", {}, {}, "#1f77b4"};
  PlotSeries sv{"||v(t)||", {}, {}, "#d62728"};
  for (const auto& s : ex.samples) {
    su.x.push_back(s.t);
    su.y.push_back(strong ? s.u_strong : s.u_quasi);
    sv.x.push_back(s.t);
    sv.y.push_back(strong ? s.v_strong : s.v_quasi);
  }
  plot.series = {su, sv};
  auto add_fit = [&](const std::optional<DecayFit>& f, const std::string& name, const std::string& color) {
    if (!f) return;
    PlotSeries fit{name + " fit", {f->t_lo, f->t_hi}, {}, color, true, false};
    PlotSeries guide{name + " target slope", {f->t_lo, f->t_hi}, {}, "#7f7f7f", true, false};
    for (double x : fit.x) {
      fit.y.push_back(std::exp(f->intercept + f->slope * std::log(x)));
      guide.y.push_back(std::exp(f->intercept + f->slope * std::log(f->t_lo)) *
                        std::pow(x / f->t_lo, f->target_exponent));
    }
    plot.series.push_back(fit);
    plot.series.push_back(guide);
  };
  add_fit(ex.fit_u, "u", "#1f77b4");
  add_fit(ex.fit_v, "v", "#d62728");
  dir.svg("decay.svg", plot);

  j["result"] = {{"verdict", to_string(ex.verdict)}, {"detail", ex.detail},
                 {"caveat", ex.caveat},               {"downgraded", ex.downgraded},
                 {"norm", to_string(cfg.norm)},       {"fit_u", fit_json(ex.fit_u)},
                 {"fit_v", fit_json(ex.fit_v)},       {"target_u", -ex.exponents.alpha},
                 {"target_v", -ex.exponents.beta}};
  dir.json_file("result.json", j);
  dir.finish();
  out << "decay: " << to_string(ex.verdict) << " (" << ex.detail << ")\n";
  if (!ex.caveat.empty()) out << "caveat: " << ex.caveat << "\n";
  out << "run directory: " << dir.path().string() << "\n";
  return is_pass(ex.verdict) ? kExitPass : kExitDiagnosed;
}

// ---------------------------------------------------------------- stability

int cmd_stability(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  auto grid = grid_of(cfg);
  StabilityOptions o;
  o.horizon = cfg.horizon;
  o.dt = cfg.dt;
  o.samples = cfg.samples;
  o.t_ref = cfg.t_ref;
  o.norm = cfg.norm;
  o.vanish_factor = cfg.vanish_factor;
  o.persist_fraction = cfg.persist_fraction;
  o.workers = g.jobs;
  RunDir dir = RunDir::create(g.out, "stability");
  start_run(dir, cfg);
  json j = metadata(cfg, "stability");
  StabilityReport rep;
  try {
    rep = stability_experiment(cfg.u0, cfg.v0, cfg.perturbation_u, cfg.perturbation_v, cfg.h, grid, cfg.model, o);
  } catch (const BlowUpError& e) {
    j["result"] = {{"verdict", "BLOW_UP"}, {"message", e.what()}, {"last_finite_time", e.last_finite_time()}};
    dir.json_file("result.json", j);
    dir.finish();
    out << "stability: blow-up\n";
    return kExitDiagnosed;
  }
  CsvTable t({"t", "diff_u", "diff_v", "combined", "linear"});
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    t.add_row({rep.times[k], rep.diff_u[k], rep.diff_v[k], rep.combined[k], rep.linear[k]});
  dir.csv("stability_series.csv", t);
  SvgPlot plot;
  plot.title = "Weighted difference series";
  plot.x_label = "t";
  plot.y_label = "weighted norm";
  plot.series = {{"t^(alpha+h)||u-u~||", rep.times, rep.diff_u, "#1f77b4"},
                 {"t^(beta+h)||v-v~||", rep.times, rep.diff_v, "#d62728"},
                 {"linear t^(alpha+h)||S(t)(u0-u~0)||", rep.times, rep.linear, "#2ca02c", true}};
  dir.svg("stability.svg", plot);
  j["result"] = {{"verdict", to_string(rep.verdict)}, {"detail", rep.detail}, {"h", rep.h},
                 {"norm", to_string(cfg.norm)},        {"vanish_factor", cfg.vanish_factor},
                 {"persist_fraction", cfg.persist_fraction}};
  dir.json_file("result.json", j);
  dir.finish();
  out << "stability: " << to_string(rep.verdict) << " (" << rep.detail << ")\nrun directory: " << dir.path().string()
      << "\n";
  return kExitPass;
}

// ---------------------------------------------------------------- invariants

struct CheckTally {
  std::string name;
  double worst = 0.0;
  double bound = 0.0;
  bool pass = true;
  void record(double value, bool ok) {
    worst = std::max(worst, value);
    pass = pass && ok;
  }
};

int cmd_invariants(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  const int n = cfg.model.n;
  const Index small_n = n == 1 ? 256 : (n == 2 ? 32 : 16);
  auto grid = make_grid(n, 8.0, small_n);
  const Propagator prop(grid);
  RandomFieldSource src(cfg.seed);
  const double cell = grid->cell_measure();

  CheckTally sandwich{"lorentz_sandwich", 0, 1e-12};
  CheckTally cheb{"chebyshev_embedding", 0, 1e-12};
  CheckTally equi{"equimeasurability", 0, 0};
  CheckTally holder{"holder_inequality", 0, 1};
  CheckTally homog{"norm_homogeneity", 0, 1e-12};
  CheckTally perm{"permutation_invariance", 0, 1e-12};
  CheckTally fft{"fft_round_trip", 0, 1e-12};
  CheckTally unit{"unitarity", 0, 1e-12};
  CheckTally group{"group_law_composition", 0, 1e-10};
  CheckTally positivity{"debye_positivity", 0, 0};

  for (int i = 0; i < cfg.invariant_fields; ++i) {
    const ComplexField f = src.complex_field(grid);
    const ComplexField h = src.complex_field(grid);
    const double r = src.uniform(1.2, 6.0);
    const Rearrangement rf = decreasing_rearrangement(f);
    const WeakNorms w = weak_norms(rf, r);
    const double strong = strong_norm(f, r);
    const double over = std::max(w.quasi - w.full, w.full - r / (r - 1.0) * w.quasi);
    sandwich.record(std::max(0.0, over) / std::max(w.quasi, 1e-300), over <= 1e-12 * std::max(w.full, 1e-300));
    cheb.record(std::max(0.0, w.quasi - strong) / std::max(strong, 1e-300), w.quasi <= strong * (1 + 1e-12));
    for (int k = 0; k < 5; ++k) {
      const double level = src.uniform(0.0, 8.0);
      const double diff = std::abs(distribution_function(f, level) - rf.distribution(level));
      equi.record(diff, diff == 0.0);
    }
    const double r1 = src.uniform(2.05, 8.0);
    const double r2 = src.uniform(1.0 / (1.0 - 1.0 / r1) + 0.05, 10.0);
    const HolderVerdict hv = holder_check(f, h, r1, r2);
    holder.record(hv.rhs > 0 ? hv.lhs / hv.rhs : 0.0, hv.holds);
    const double c = src.uniform(-5.0, 5.0);
    const ComplexField cf(grid, c * f.values());
    const WeakNorms wc = weak_norms(cf, r);
    const double hom = std::abs(wc.quasi - std::abs(c) * w.quasi) / std::max(std::abs(c) * w.quasi, 1e-300);
    homog.record(hom, hom <= 1e-12);
    ComplexArray shuffled = f.values();
    std::shuffle(shuffled.data(), shuffled.data() + shuffled.size(), src.engine());
    const WeakNorms ws = weak_norms(ComplexField(grid, shuffled), r);
    const double pdiff = std::abs(ws.full - w.full) / std::max(w.full, 1e-300);
    perm.record(pdiff, pdiff <= 1e-12);
    const double nf = std::sqrt(f.values().abs2().sum());
    const double rt = std::sqrt((grid->inverse(grid->forward(f.values())) - f.values()).abs2().sum()) / nf;
    fft.record(rt, rt < 1e-12);
    const GroupLawCheck gl = group_laws_check(prop, f, src.uniform(-2.0, 2.0), src.uniform(-2.0, 2.0));
    unit.record(gl.unitarity_error, gl.unitarity_error < 1e-12);
    group.record(std::max(gl.composition_error, gl.inverse_error),
                 gl.composition_error < 1e-10 && gl.inverse_error < 1e-10);
    if (cfg.model.lambda == 1) {
      const RealField v0 = src.nonnegative_field(grid);
      const RealField v1 = debye_step(v0, f, h, src.uniform(0.001, 2.0), cfg.model);
      const double neg = std::max(0.0, -v1.values().minCoeff());
      positivity.record(neg, neg == 0.0);
    }
  }
  (void)cell;

  // Split-step mass drift on the configured data.
  CheckTally drift{"splitstep_mass_drift", 0, 1e-10};
  {
    auto cgrid = grid_of(cfg);
    const ComplexField u0 = make_u0(cfg.u0, cgrid, cfg.model);
    const RealField v0 = make_v0(cfg.v0, cgrid, cfg.model);
    StepperConfig sc;
    sc.dt = cfg.dt;
    sc.horizon = cfg.dt * cfg.invariant_steps;
    sc.stride = 1;
    sc.coupling = cfg.coupling;
    const double m0 = mass(u0);
    march(u0, v0, sc, cfg.model, [&](double, const ComplexField& u, const RealField&) {
      const double d = m0 > 0 ? std::abs(mass(u) - m0) / m0 : mass(u);
      drift.record(d, d < 1e-10);
    });
  }

  const std::vector<CheckTally> all = {sandwich, cheb, equi, holder, homog, perm, fft, unit, group, positivity, drift};
  RunDir dir = RunDir::create(g.out, "invariants");
  start_run(dir, cfg);
  CsvTable t({"check", "worst_value", "bound", "pass"});
  SvgPlot plot;
  plot.title = "Worst observed value per invariant";
  plot.x_label = "check index";
  plot.y_label = "worst value";
  plot.log_x = false;
  PlotSeries s{"worst value", {}, {}, "#1f77b4"};
  bool pass = true;
  json checks = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& c = all[i];
    t.add_text_row({c.name, format_double(c.worst), format_double(c.bound), c.pass ? "PASS" : "FAIL"});
    s.x.push_back(static_cast<double>(i));
    s.y.push_back(c.worst);
    checks.push_back({{"check", c.name}, {"worst_value", c.worst}, {"bound", c.bound}, {"pass", c.pass}});
    pass = pass && c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " worst " << format_double(c.worst) << "\n";
  }
  plot.series = {s};
  dir.csv("invariants.csv", t);
  dir.svg("invariants.svg", plot);
  json j = metadata(cfg, "invariants");
  j["result"] = {{"verdict", pass ? "PASS" : "FAIL"}, {"fields", cfg.invariant_fields}, {"checks", checks}};
  dir.json_file("result.json", j);
  dir.finish();
  out << "invariants: " << (pass ? "PASS" : "FAIL") << "\nrun directory: " << dir.path().string() << "\n";
  return pass ? kExitPass : kExitDiagnosed;
}

// ---------------------------------------------------------------- norms

int cmd_norms(const RunConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  auto grid = grid_of(cfg);
  const ComplexField u0 = make_u0(cfg.u0, grid, cfg.model);
  const RealField v0 = make_v0(cfg.v0, grid, cfg.model);
  const Propagator prop(grid);
  const ScalingExponents e = derive_exponents(cfg.model);
  const double ru = cfg.model.p + 2.0, rv = (cfg.model.p + 2.0) / cfg.model.p;
  std::vector<double> times = cfg.norm_times;
  if (times.empty()) times.push_back(0.0);

  RunDir dir = RunDir::create(g.out, "norms");
  start_run(dir, cfg);
  CsvTable t({"time", "field", "r", "quasi_norm", "full_norm", "strong_norm", "truncation_sensitivity"});
  PlotSeries su{"t^alpha ||S(t)u0||*", {}, {}, "#1f77b4"};
  json rows = json::array();
  for (double time : times) {
    const ComplexField ut = prop.propagate(u0, time);
    const RealField vt(grid, std::exp(-time / cfg.model.mu) * v0.values());
    for (const auto& [name, rep] : {std::pair<std::string, WeakNormReport>{"u", weak_norm_report(ut, ru)},
                                    {"v", weak_norm_report(vt, rv)}}) {
      t.add_text_row({format_double(time), name, format_double(rep.r), format_double(rep.quasi_norm),
                      format_double(rep.full_norm), format_double(rep.strong_norm),
                      format_double(rep.truncation_sensitivity)});
      rows.push_back({{"time", time}, {"field", name}, {"r", rep.r}, {"quasi_norm", rep.quasi_norm},
                      {"full_norm", rep.full_norm}, {"strong_norm", rep.strong_norm},
                      {"truncation_sensitivity", rep.truncation_sensitivity}});
      if (name == "u" && time > 0) {
        su.x.push_back(time);
        su.y.push_back(std::pow(time, e.alpha) * rep.quasi_norm);
      }
      out << "t = " << format_double(time) << " " << name << ": quasi " << format_double(rep.quasi_norm) << ", full "
          << format_double(rep.full_norm) << ", strong " << format_double(rep.strong_norm) << "\n";
    }
  }
  dir.csv("norms.csv", t);
  SvgPlot plot;
  plot.title = "Weighted weak quasi-norm of the free evolution";
  plot.x_label = "t";
  plot.y_label = "t^alpha ||S(t)u0||*";
  plot.series = {su};
  dir.svg("norms.svg", plot);
  json j = metadata(cfg, "norms");
  j["result"] = {{"rows", rows}};
  dir.json_file("result.json", j);
  dir.finish();
  out << "run directory: " << dir.path().string() << "\n";
  return kExitPass;
}

}  // namespace

int run_command(const std::string& command, const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.config.empty()) throw ConfigError("--config is required");
    if (options.jobs < 1) throw ConfigError("--jobs must be >= 1");
    RunConfig cfg = load_config(options.config);
    if (options.seed) cfg.seed = *options.seed;
    const auto errors = cross_validate(cfg, command);
    if (!errors.empty()) {
      for (const auto& e : errors) err << "config error: " << e << "\n";
      return kExitError;
    }
    if (command == "check-params") return cmd_check_params(cfg, out);
    for (const auto& w : config_warnings(cfg)) err << "warning: " << w << "\n";
    if (command == "simulate") return cmd_simulate(cfg, options, out);
    if (command == "picard") return cmd_picard(cfg, options, out);
    if (command == "decay") return cmd_decay(cfg, options, out);
    if (command == "stability") return cmd_stability(cfg, options, out);
    if (command == "invariants") return cmd_invariants(cfg, options, out);
    if (command == "norms") return cmd_norms(cfg, options, out);
    err << "unknown command '" << command << "'\n";
    return kExitError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Schrodinger-Debye numerical lab"};
  GlobalOptions opts;
  std::uint64_t seed = 0;
  app.add_option("--config", opts.config, "INI or JSON run configuration");
  app.add_option("--out", opts.out, "root directory for run outputs")->capture_default_str();
  app.add_option("--jobs", opts.jobs, "concurrent workers for sweeps and paired runs")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for random-field checks (overrides run.seed)");
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check-params", "print exponents and the admissibility verdict"},
      {"simulate", "split-step run (optionally cross-checked against Picard)"},
      {"picard", "Picard iteration with contraction diagnostics, or an amplitude sweep"},
      {"decay", "decay-rate experiment for weak and strong norms"},
      {"stability", "asymptotic stability experiment for a perturbed datum"},
      {"invariants", "property suite on seeded random fields"},
      {"norms", "weak-norm report of the configured data"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitError;
  }
  if (*seed_opt) opts.seed = seed;
  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, opts, std::cout, std::cerr);
}

}  // namespace sdlab::cli
