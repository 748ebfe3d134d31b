#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "sdlab/report.hpp"

namespace sdlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, FlatConfig& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (prefix.empty()) throw ConfigError("JSON config must be an object");
  if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else if (j.is_boolean()) {
    out[prefix] = j.get<bool>() ? "true" : "false";
  } else if (j.is_number_integer()) {
    out[prefix] = std::to_string(j.get<long long>());
  } else if (j.is_number()) {
    out[prefix] = format_double(j.get<double>());
  } else if (j.is_array()) {
    // Arrays of arrays become ';'-separated point lists.
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& e = j[i];
      std::string item;
      if (e.is_array()) {
        for (std::size_t k = 0; k < e.size(); ++k) item += (k ? "," : "") + format_double(e[k].get<double>());
        s += (i ? ";" : "") + item;
      } else {
        s += (i ? "," : "") + (e.is_string() ? e.get<std::string>() : format_double(e.get<double>()));
      }
    }
    out[prefix] = s;
  } else {
    throw ConfigError(prefix + ": unsupported JSON value");
  }
}

class Reader {
 public:
  explicit Reader(const FlatConfig& flat) : flat_(flat) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return flat_.count(key) > 0;
  }
  std::string str(const std::string& key, const std::string& def) {
    return has(key) ? trim(flat_.at(key)) : def;
  }
  double num(const std::string& key, double def) { return has(key) ? parse_num(key, flat_.at(key)) : def; }
  double required_num(const std::string& key) {
    if (!has(key)) throw ConfigError(key + ": required key is missing");
    return parse_num(key, flat_.at(key));
  }
  long integer(const std::string& key, long def) {
    if (!has(key)) return def;
    const double x = parse_num(key, flat_.at(key));
    if (x != std::floor(x)) throw ConfigError(key + ": expected an integer, got '" + flat_.at(key) + "'");
    return static_cast<long>(x);
  }
  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const std::string v = trim(flat_.at(key));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
  }
  std::vector<double> vec(const std::string& key, const std::vector<double>& def) {
    if (!has(key)) return def;
    return parse_vec(key, flat_.at(key));
  }
  std::vector<std::vector<double>> points(const std::string& key) {
    std::vector<std::vector<double>> out;
    if (!has(key)) return out;
    std::stringstream ss(flat_.at(key));
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!trim(item).empty()) out.push_back(parse_vec(key, item));
    return out;
  }
  void reject_unused() const {
    for (const auto& [k, v] : flat_)
      if (!used_.count(k)) throw ConfigError(k + ": unknown key");
  }

 private:
  static double parse_num(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
  }
  static std::vector<double> parse_vec(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) out.push_back(parse_num(key, item));
    return out;
  }

  const FlatConfig& flat_;
  std::set<std::string> used_;
};

DataRecipe read_recipe(Reader& r, const std::string& section) {
  DataRecipe d;
  const std::string kind = r.str(section + ".kind", "zero");
  try {
    d.kind = data_kind_from_string(kind);
  } catch (const std::invalid_argument&) {
    throw ConfigError(section + ".kind: unknown data kind '" + kind + "'");
  }
  d.amplitude = r.num(section + ".amplitude", 0.0);
  d.width = r.num(section + ".width", 1.0);
  d.center = r.vec(section + ".center", {});
  d.wavevector = r.vec(section + ".wavevector", {});
  d.homogeneous.degree = static_cast<int>(r.integer(section + ".degree", 0));
  d.homogeneous.coefficients = r.vec(section + ".coefficients", {});
  d.homogeneous.centers = r.points(section + ".centers");
  d.homogeneous.weights = r.vec(section + ".weights", {});
  d.homogeneous.r_min = r.num(section + ".r_min", 0.0);
  d.homogeneous.r_out = r.num(section + ".r_out", 0.0);
  d.homogeneous.mollified = r.boolean(section + ".mollified", false);
  return d;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

void echo_recipe(std::ostringstream& o, const std::string& section, const DataRecipe& d) {
  o << "\n[" << section << "]\n";
  o << "kind = " << to_string(d.kind) << "\n";
  if (d.kind == DataKind::zero) return;
  o << "amplitude = " << format_double(d.amplitude) << "\n";
  if (d.kind != DataKind::homogeneous) {
    o << "width = " << format_double(d.width) << "\n";
    if (!d.center.empty()) o << "center = " << join(d.center) << "\n";
    if (!d.wavevector.empty()) o << "wavevector = " << join(d.wavevector) << "\n";
    return;
  }
  const auto& h = d.homogeneous;
  o << "degree = " << h.degree << "\n";
  if (!h.coefficients.empty()) o << "coefficients = " << join(h.coefficients) << "\n";
  if (!h.centers.empty()) {
    o << "centers = ";
    for (std::size_t i = 0; i < h.centers.size(); ++i) o << (i ? "; " : "") << join(h.centers[i]);
    o << "\n";
  }
  if (!h.weights.empty()) o << "weights = " << join(h.weights) << "\n";
  o << "r_min = " << format_double(h.r_min) << "\n";
  o << "r_out = " << format_double(h.r_out) << "\n";
  o << "mollified = " << (h.mollified ? "true" : "false") << "\n";
}

}  // namespace

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::picard: return "picard";
    case SolverKind::splitstep: return "splitstep";
    case SolverKind::both: return "both";
  }
  return "unknown";
}

FlatConfig parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("INI parse error: ") + e.what());
  }
  FlatConfig out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": key outside a section");
    for (const auto& [key, value] : body) out[section + "." + key] = value.get_value<std::string>();
  }
  return out;
}

FlatConfig parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
  FlatConfig out;
  flatten_json(j, "", out);
  return out;
}

FlatConfig read_flat_config(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  return parse_ini(text);
}

RunConfig config_from_flat(const FlatConfig& flat) {
  Reader r(flat);
  RunConfig c;
  c.raw = flat;
  c.model.n = static_cast<int>(std::lround(r.required_num("model.n")));
  if (r.num("model.n", 0) != c.model.n) throw ConfigError("model.n: expected an integer");
  c.model.p = r.required_num("model.p");
  c.model.mu = r.num("model.mu", 1.0);
  c.model.lambda = static_cast<int>(r.integer("model.lambda", 1));
  try {
    validate(c.model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  c.half_length = r.num("grid.half_length", c.half_length);
  c.points = r.integer("grid.points", c.points);
  if (!(c.half_length > 0.0)) throw ConfigError("grid.half_length: must be positive");
  if (c.points < 8 || (c.points & (c.points - 1)) != 0)
    throw ConfigError("grid.points: must be a power of two >= 8");

  c.u0 = read_recipe(r, "u0");
  c.v0 = read_recipe(r, "v0");
  c.perturbation_u = read_recipe(r, "perturbation_u");
  c.perturbation_v = read_recipe(r, "perturbation_v");
  if (c.v0.kind == DataKind::modulated_gaussian) throw ConfigError("v0.kind: v must be real-valued");
  if (c.perturbation_v.kind == DataKind::modulated_gaussian)
    throw ConfigError("perturbation_v.kind: v must be real-valued");

  const std::string solver = r.str("solver.kind", "splitstep");
  if (solver == "picard") c.solver = SolverKind::picard;
  else if (solver == "splitstep") c.solver = SolverKind::splitstep;
  else if (solver == "both") c.solver = SolverKind::both;
  else throw ConfigError("solver.kind: expected picard, splitstep or both, got '" + solver + "'");
  c.horizon = r.num("solver.horizon", c.horizon);
  c.dt = r.num("solver.dt", c.dt);
  c.stride = static_cast<int>(r.integer("solver.stride", c.stride));
  c.coupling = r.boolean("solver.coupling", c.coupling);
  c.mesh_cells = static_cast<int>(r.integer("solver.mesh_cells", c.mesh_cells));
  c.mesh_grading = r.num("solver.mesh_grading", c.mesh_grading);
  c.max_iters = static_cast<int>(r.integer("solver.max_iters", c.max_iters));
  c.tol = r.num("solver.tol", c.tol);
  const std::string fc = r.str("solver.first_cell", "power_law");
  if (fc == "power_law") c.first_cell = FirstCellRule::power_law;
  else if (fc == "trapezoid") c.first_cell = FirstCellRule::trapezoid;
  else throw ConfigError("solver.first_cell: expected power_law or trapezoid, got '" + fc + "'");
  const std::string metric = r.str("solver.metric", "quasi");
  if (metric == "quasi") c.metric = WeakMetric::quasi;
  else if (metric == "full") c.metric = WeakMetric::full;
  else throw ConfigError("solver.metric: expected quasi or full, got '" + metric + "'");
  if (!(c.horizon > 0.0)) throw ConfigError("solver.horizon: must be positive");
  if (!(c.dt > 0.0) || c.dt > c.horizon) throw ConfigError("solver.dt: must satisfy 0 < dt <= horizon");
  if (c.stride < 1) throw ConfigError("solver.stride: must be >= 1");
  if (c.mesh_cells < 1) throw ConfigError("solver.mesh_cells: must be >= 1");
  if (!(c.mesh_grading >= 1.0)) throw ConfigError("solver.mesh_grading: must be >= 1");
  if (c.max_iters < 1) throw ConfigError("solver.max_iters: must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("solver.tol: must be positive");

  c.h = r.num("experiment.h", c.h);
  c.samples = static_cast<int>(r.integer("experiment.samples", c.samples));
  c.t_start = r.num("experiment.t_start", c.t_start);
  c.fit_t_min = r.num("experiment.fit_t_min", c.fit_t_min);
  c.margin_min = r.num("experiment.margin_min", c.margin_min);
  c.caveat_margin = r.num("experiment.caveat_margin", c.caveat_margin);
  c.spectral_quantile = r.num("experiment.spectral_quantile", c.spectral_quantile);
  const std::string norm = r.str("experiment.norm", "quasi");
  if (norm == "quasi") c.norm = NormKind::quasi;
  else if (norm == "strong") c.norm = NormKind::strong;
  else throw ConfigError("experiment.norm: expected quasi or strong, got '" + norm + "'");
  c.t_ref = r.num("experiment.t_ref", c.t_ref);
  c.vanish_factor = r.num("experiment.vanish_factor", c.vanish_factor);
  c.persist_fraction = r.num("experiment.persist_fraction", c.persist_fraction);
  c.tolerance = r.num("experiment.tolerance", c.tolerance);
  c.min_r2 = r.num("experiment.min_r2", c.min_r2);
  c.norm_times = r.vec("experiment.times", {});
  if (c.samples < 2) throw ConfigError("experiment.samples: must be >= 2");
  if (!(c.t_start > 0.0)) throw ConfigError("experiment.t_start: must be positive");
  if (!(c.spectral_quantile > 0.0) || c.spectral_quantile > 1.0)
    throw ConfigError("experiment.spectral_quantile: must lie in (0, 1]");
  for (double t : c.norm_times)
    if (t < 0.0) throw ConfigError("experiment.times: times must be >= 0");

  c.sweep_amplitudes = r.vec("sweep.amplitudes", {});
  for (double a : c.sweep_amplitudes)
    if (!(a >= 0.0)) throw ConfigError("sweep.amplitudes: factors must be >= 0");

  const double seed = r.num("run.seed", 1.0);
  if (seed < 0 || seed != std::floor(seed)) throw ConfigError("run.seed: expected a nonnegative integer");
  c.seed = static_cast<std::uint64_t>(seed);
  c.invariant_fields = static_cast<int>(r.integer("run.invariant_fields", c.invariant_fields));
  c.invariant_steps = static_cast<int>(r.integer("run.invariant_steps", c.invariant_steps));
  if (c.invariant_fields < 1) throw ConfigError("run.invariant_fields: must be >= 1");
  if (c.invariant_steps < 1) throw ConfigError("run.invariant_steps: must be >= 1");

  r.reject_unused();
  return c;
}

RunConfig load_config(const std::string& path) { return config_from_flat(read_flat_config(path)); }

std::string echo_ini(const RunConfig& c) {
  std::ostringstream o;
  o << "[model]\nn = " << c.model.n << "\np = " << format_double(c.model.p) << "\nmu = " << format_double(c.model.mu)
    << "\nlambda = " << c.model.lambda << "\n";
  o << "\n[grid]\nhalf_length = " << format_double(c.half_length) << "\npoints = " << c.points << "\n";
  echo_recipe(o, "u0", c.u0);
  echo_recipe(o, "v0", c.v0);
  echo_recipe(o, "perturbation_u", c.perturbation_u);
  echo_recipe(o, "perturbation_v", c.perturbation_v);
  o << "\n[solver]\nkind = " << to_string(c.solver) << "\nhorizon = " << format_double(c.horizon)
    << "\ndt = " << format_double(c.dt) << "\nstride = " << c.stride << "\ncoupling = " << (c.coupling ? "true" : "false")
    << "\nmesh_cells = " << c.mesh_cells << "\nmesh_grading = " << format_double(c.mesh_grading)
    << "\nmax_iters = " << c.max_iters << "\ntol = " << format_double(c.tol) << "\nfirst_cell = " << to_string(c.first_cell)
    << "\nmetric = " << to_string(c.metric) << "\n";
  o << "\n[experiment]\nh = " << format_double(c.h) << "\nsamples = " << c.samples
    << "\nt_start = " << format_double(c.t_start) << "\nfit_t_min = " << format_double(c.fit_t_min)
    << "\nmargin_min = " << format_double(c.margin_min) << "\ncaveat_margin = " << format_double(c.caveat_margin)
    << "\nspectral_quantile = " << format_double(c.spectral_quantile) << "\nnorm = " << to_string(c.norm)
    << "\nt_ref = " << format_double(c.t_ref) << "\nvanish_factor = " << format_double(c.vanish_factor)
    << "\npersist_fraction = " << format_double(c.persist_fraction) << "\ntolerance = " << format_double(c.tolerance)
    << "\nmin_r2 = " << format_double(c.min_r2) << "\n";
  if (!c.norm_times.empty()) o << "times = " << join(c.norm_times) << "\n";
  if (!c.sweep_amplitudes.empty()) o << "\n[sweep]\namplitudes = " << join(c.sweep_amplitudes) << "\n";
  o << "\n[run]\nseed = " << c.seed << "\ninvariant_fields = " << c.invariant_fields
    << "\ninvariant_steps = " << c.invariant_steps << "\n";
  return o.str();
}

std::vector<std::string> cross_validate(const RunConfig& c, const std::string& command) {
  std::vector<std::string> errors;
  const Admissibility adm = is_admissible(c.model);
  const bool needs_admissible = command == "picard" || command == "decay" || command == "stability" ||
                                (command == "simulate" && c.solver != SolverKind::splitstep);
  if (needs_admissible && !adm.admissible) errors.push_back("model: inadmissible (n, p): " + adm.reason);
  if (command == "stability") {
    const double h_max = derive_exponents(c.model).h_max;
    if (!(c.h >= 0.0) || !(c.h < h_max))
      errors.push_back("experiment.h: " + format_double(c.h) + " outside [0, h_max = " + format_double(h_max) + ")");
    if (!(c.t_ref > 0.0) || !(c.t_ref < c.horizon))
      errors.push_back("experiment.t_ref: must satisfy 0 < t_ref < solver.horizon");
  }
  if (command == "decay") {
    if (!(c.t_start < c.horizon)) errors.push_back("experiment.t_start: must be below solver.horizon");
    if (c.samples < 8) errors.push_back("experiment.samples: decay fits need >= 8 samples");
  }
  auto check_center = [&](const std::string& name, const std::vector<double>& v) {
    if (!v.empty() && static_cast<int>(v.size()) != c.model.n)
      errors.push_back(name + ": needs " + std::to_string(c.model.n) + " components");
  };
  for (const auto& [name, d] : {std::pair<std::string, const DataRecipe*>{"u0", &c.u0}, {"v0", &c.v0},
                                {"perturbation_u", &c.perturbation_u}, {"perturbation_v", &c.perturbation_v}}) {
    check_center(name + ".center", d->center);
    if (d->kind == DataKind::modulated_gaussian) check_center(name + ".wavevector", d->wavevector);
    for (const auto& pc : d->homogeneous.centers) check_center(name + ".centers", pc);
    if (d->kind == DataKind::homogeneous) {
      const double dx = 2.0 * c.half_length / static_cast<double>(c.points);
      if (d->homogeneous.r_min < dx) errors.push_back(name + ".r_min: must be >= dx = " + format_double(dx));
      if (d->homogeneous.r_out > 0.5 * c.half_length)
        errors.push_back(name + ".r_out: must be <= L/2 = " + format_double(0.5 * c.half_length));
      if (!(d->homogeneous.r_out > d->homogeneous.r_min)) errors.push_back(name + ".r_out: must exceed r_min");
    }
  }
  return errors;
}

std::vector<std::string> config_warnings(const RunConfig& c) {
  std::vector<std::string> w;
  try {
    auto grid = make_grid(c.model.n, c.half_length, c.points);
    const ComplexField u0 = make_u0(c.u0, grid, c.model);
    const double margin = no_wrap_margin(u0, c.horizon, c.spectral_quantile);
    if (margin < 1.0)
      w.push_back("no-wrap margin at the horizon is " + format_double(margin) +
                  " (< 1): dominant frequencies wrap around the box");
  } catch (const std::exception&) {
    // Data errors surface when the command builds the fields.
  }
  return w;
}

}  // namespace sdlab::cli
