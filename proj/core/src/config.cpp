#include "phonon/config.hpp"

#include "phonon/csv.hpp"
#include "phonon/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace phonon {
namespace {

using json = nlohmann::ordered_json;

std::string type_name(const json& j) { return j.type_name(); }

// Reads one object, recording every value it hands out (given or default) into
// `out` and rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& in, std::string path, json& out) : in_(in), path_(std::move(path)), out_(out) {
    if (!in_.is_null() && !in_.is_object())
      throw ConfigError(where() + ": expected an object, got " + type_name(in_));
    if (!out_.is_object()) out_ = json::object();
  }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return in_.is_object() && in_.contains(key) && !in_[key].is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    static const json null_value;
    return has(key) ? in_[key] : null_value;
  }

  double number(const std::string& key, double def) {
    const json& v = raw(key);
    double r = def;
    if (!v.is_null()) {
      if (!v.is_number()) throw ConfigError(where(key) + ": expected a number, got " + type_name(v));
      r = v.get<double>();
    }
    out_[key] = r;
    return r;
  }

  double positive(const std::string& key, double def) {
    const double r = number(key, def);
    if (!(r > 0.0)) throw ConfigError(where(key) + ": must be > 0, got " + format_double(r));
    return r;
  }

  std::optional<double> optional_number(const std::string& key) {
    const json& v = raw(key);
    if (v.is_null()) {
      out_[key] = nullptr;
      return std::nullopt;
    }
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number or null, got " + type_name(v));
    out_[key] = v.get<double>();
    return v.get<double>();
  }

  long integer(const std::string& key, long def) {
    const json& v = raw(key);
    long r = def;
    if (!v.is_null()) {
      if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer, got " + type_name(v));
      r = v.get<long>();
    }
    out_[key] = r;
    return r;
  }

  bool boolean(const std::string& key, bool def) {
    const json& v = raw(key);
    bool r = def;
    if (!v.is_null()) {
      if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false, got " + type_name(v));
      r = v.get<bool>();
    }
    out_[key] = r;
    return r;
  }

  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
    const json& v = raw(key);
    std::string r = def;
    if (!v.is_null()) {
      if (!v.is_string()) throw ConfigError(where(key) + ": expected a string, got " + type_name(v));
      r = v.get<std::string>();
    }
    if (std::find(allowed.begin(), allowed.end(), r) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where(key) + ": \"" + r + "\" is not one of " + list);
    }
    out_[key] = r;
    return r;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
    const json& v = raw(key);
    std::vector<double> r = def;
    if (!v.is_null()) {
      if (!v.is_array()) throw ConfigError(where(key) + ": expected an array, got " + type_name(v));
      r.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
          throw ConfigError(where(key) + "[" + std::to_string(i) + "]: expected a number, got " + type_name(v[i]));
        r.push_back(v[i].get<double>());
      }
    }
    out_[key] = r;
    return r;
  }

  Reader child(const std::string& key) {
    const json& v = raw(key);
    return Reader(v, where(key), out_[key]);
  }

  void finish() const {
    if (!in_.is_object()) return;
    for (const auto& [k, v] : in_.items())
      if (!seen_.count(k)) throw ConfigError(where(k) + ": unknown key");
  }

  json& out() { return out_; }

 private:
  const json& in_;
  std::string path_;
  json& out_;
  std::set<std::string> seen_;
};

TabulatedLaw read_rows(Reader& r, const std::filesystem::path& base) {
  TabulatedLaw t;
  if (r.has("file") == r.has("rows")) throw ConfigError(r.where() + ": a table needs exactly one of file, rows");
  if (r.has("file")) {
    const json& f = r.raw("file");
    if (!f.is_string()) throw ConfigError(r.where("file") + ": expected a path string");
    std::filesystem::path p = f.get<std::string>();
    if (p.is_relative()) p = base / p;
    try {
      t.rows = read_two_column_csv(p);
    } catch (const std::exception& e) {
      throw ConfigError(r.where("file") + ": " + e.what());
    }
    r.out()["file"] = f;
    r.out()["rows"] = t.rows;
  } else {
    const json& rows = r.raw("rows");
    if (!rows.is_array()) throw ConfigError(r.where("rows") + ": expected an array of [omega, value]");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const json& row = rows[i];
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        throw ConfigError(r.where("rows") + "[" + std::to_string(i) + "]: expected [omega, value]");
      t.rows.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    r.out()["rows"] = t.rows;
  }
  if (t.rows.empty()) throw ConfigError(r.where() + ": table is empty");
  return t;
}

FrequencyLaw read_law(Reader r, PowerLaw def, const std::filesystem::path& base) {
  const std::string kind = r.choice("kind", "power_law", {"power_law", "table"});
  if (kind == "power_law") {
    PowerLaw p{r.number("coeff", def.coeff), r.number("exponent", def.exponent)};
    r.finish();
    return p;
  }
  TabulatedLaw t = read_rows(r, base);
  r.finish();
  try {
    return FrequencyLaw(std::move(t));
  } catch (const ConfigError& e) {
    throw ConfigError(r.where() + ": " + e.what());
  }
}

ReflectionModel read_eta(Reader r, double a, double b, const std::filesystem::path& base) {
  const std::string kind = r.choice("kind", "tanh", {"tanh", "table", "constant"});
  ReflectionModel m = ReflectionModel::constant(0.0);
  if (kind == "tanh") {
    const double av = r.number("a", a);
    const double bv = r.number("b", b);
    m = ReflectionModel::tanh_param(av, bv);
  } else if (kind == "table") {
    m = ReflectionModel::table(read_rows(r, base));
  } else {
    const double v = r.number("value", 0.5);
    if (v < 0.0 || v > 1.0) throw ConfigError(r.where("value") + ": must lie in [0, 1]");
    m = ReflectionModel::constant(v);
  }
  r.finish();
  return m;
}

SourceSpec read_source_fields(Reader& r, SourceSpec s) {
  s.kind = r.choice("kind", s.kind == SourceSpec::Kind::smooth ? "smooth" : "grid_delta",
                    {"smooth", "grid_delta"}) == "smooth"
               ? SourceSpec::Kind::smooth
               : SourceSpec::Kind::grid_delta;
  s.mu0 = r.number("mu0", s.mu0);
  s.omega0 = r.number("omega0", s.omega0);
  s.theta_t = r.positive("theta_t", s.theta_t);
  s.theta_mu = r.positive("theta_mu", s.theta_mu);
  s.theta_omega = r.positive("theta_omega", s.theta_omega);
  s.t0 = r.number("t0", s.t0);
  s.amplitude = r.number("amplitude", s.amplitude);
  if (!(s.mu0 > 0.0 && s.mu0 <= 1.0)) throw ConfigError(r.where("mu0") + ": must lie in (0, 1]");
  if (s.t0 < 0.0) throw ConfigError(r.where("t0") + ": must be >= 0");
  return s;
}

TestFunctionSpec read_test(Reader r) {
  TestFunctionSpec t;
  t.kind = r.choice("kind", "grid_delta", {"grid_delta", "smooth"}) == "smooth" ? TestFunctionSpec::Kind::smooth
                                                                                : TestFunctionSpec::Kind::grid_delta;
  t.theta = r.number("theta", 0.0);
  t.theta_rel = r.optional_number("theta_rel");
  t.t1 = r.optional_number("t1");
  if (t.kind == TestFunctionSpec::Kind::smooth && !t.theta_rel && !(t.theta > 0.0))
    throw ConfigError(r.where("theta") + ": a smooth test function needs theta > 0 or theta_rel");
  if (t.theta_rel && !(*t.theta_rel > 0.0)) throw ConfigError(r.where("theta_rel") + ": must be > 0");
  r.finish();
  return t;
}

void check_epsilons(const std::vector<double>& e, const std::string& where) {
  if (e.empty()) throw ConfigError(where + ": list is empty");
  for (double v : e)
    if (!(v > 0.0)) throw ConfigError(where + ": every epsilon must be > 0, got " + format_double(v));
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json in;
  try {
    in = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  json out = json::object();
  Reader root(in, "", out);
  RunConfig cfg;

  const long version = root.integer("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion)
    throw ConfigError("schema_version: unsupported version " + std::to_string(version) + " (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");

  cfg.preset = root.choice("preset", "desk", {"desk", "full"});
  const bool full_scale = cfg.preset == "full";
  GridSpec g = full_scale ? GridSpec::full() : GridSpec::desk();
  {
    Reader r = root.child("grid");
    g.name = cfg.preset;
    g.x_max = r.positive("x_max", g.x_max);
    g.dx_cap = r.positive("dx_cap", g.dx_cap);
    g.dx_ratio = r.positive("dx_ratio", g.dx_ratio);
    g.n_mu = static_cast<int>(r.integer("n_mu", g.n_mu));
    g.omega_min = r.positive("omega_min", g.omega_min);
    g.d_omega = r.positive("d_omega", g.d_omega);
    g.n_omega = static_cast<int>(r.integer("n_omega", g.n_omega));
    g.cfl = r.positive("cfl", g.cfl);
    g.eps2_cap = r.boolean("eps2_cap", g.eps2_cap);
    g.dt_override = r.optional_number("dt");
    if (g.n_mu < 2 || g.n_mu % 2 != 0) throw ConfigError(r.where("n_mu") + ": must be even and >= 2");
    if (g.n_omega < 1) throw ConfigError(r.where("n_omega") + ": must be >= 1");
    if (g.dt_override && !(*g.dt_override > 0.0)) throw ConfigError(r.where("dt") + ": must be > 0");
    r.finish();
  }
  cfg.setup.grid = g;

  {
    Reader r = root.child("material");
    FrequencyLaw nu = read_law(r.child("nu"), PowerLaw{1.0, 1.0}, base_dir);
    FrequencyLaw tau = read_law(r.child("tau"), PowerLaw{1.0, -1.0}, base_dir);
    FrequencyLaw c = read_law(r.child("c_omega"), PowerLaw{1.0, 0.0}, base_dir);
    MaterialBounds b;
    b.tau_min = r.optional_number("tau_min");
    b.nu_min = r.optional_number("nu_min");
    b.nu_max = r.optional_number("nu_max");
    r.finish();
    if (const auto* t = std::get_if<TabulatedLaw>(&tau.law()))
      for (const auto& [w, v] : t->rows)
        if (!(v > 0.0) || (b.tau_min && v < *b.tau_min))
          throw ConfigError("material.tau: relaxation time must satisfy tau >= tau_min > 0 (bounded below); "
                            "table row omega = " + format_double(w) + " has tau = " + format_double(v));
    cfg.setup.material = MaterialModel(nu, tau, c, b);
    std::vector<double> nodes(g.n_omega);
    for (int k = 0; k < g.n_omega; ++k) nodes[k] = g.omega_min + k * g.d_omega;
    cfg.setup.material.validate(nodes);
  }

  {
    Reader r = root.child("solver");
    SolverConfig& s = cfg.setup.solver;
    s.collision = r.choice("collision_mode", "explicit", {"explicit", "semi_implicit"}) == "explicit"
                      ? CollisionMode::explicit_euler
                      : CollisionMode::semi_implicit;
    const std::string sc = r.choice("scattering", "bgk", {"bgk", "absorption_only", "none"});
    s.scattering = sc == "bgk" ? Scattering::bgk : sc == "none" ? Scattering::none : Scattering::absorption_only;
    s.coupling = r.choice("coupling_mode", "reflective_only", {"reflective_only", "coupled"}) == "coupled"
                     ? CouplingMode::coupled
                     : CouplingMode::reflective_only;
    s.interface_c = r.positive("interface_c", 1.0);
    {
      Reader sub = r.child("substrate");
      s.substrate.nu_factor = sub.positive("nu_factor", s.substrate.nu_factor);
      s.substrate.tau_factor = sub.positive("tau_factor", s.substrate.tau_factor);
      s.substrate.length_factor = sub.positive("length_factor", s.substrate.length_factor);
      sub.finish();
    }
    s.diagnostics = r.boolean("diagnostics", false);
    s.equilibrium_level = r.optional_number("equilibrium_level");
    if (s.equilibrium_level && *s.equilibrium_level < 0.0)
      throw ConfigError(r.where("equilibrium_level") + ": must be >= 0");
    r.finish();
  }

  cfg.eta = read_eta(root.child("eta"), 1.5, 1.0, base_dir);
  cfg.eta_alt = read_eta(root.child("eta_alt"), 1.4, 0.9, base_dir);
  cfg.setup.solver.eta = cfg.eta;

  {
    Reader r = root.child("source");
    cfg.source = read_source_fields(r, SourceSpec{});
    const std::string family = r.choice("family", "all_nodes", {"all_nodes", "single"});
    std::vector<double> nodes = r.numbers("nodes", {});
    r.finish();
    if (family == "single") {
      cfg.setup.sources = {cfg.source};
    } else {
      auto all = sources_on_all_nodes(g, cfg.source);
      if (nodes.empty()) {
        cfg.setup.sources = all;
      } else {
        for (double n : nodes) {
          const long k = static_cast<long>(n);
          if (k != n || k < 0 || k >= g.n_omega)
            throw ConfigError("source.nodes: " + format_double(n) + " is not a frequency node index in [0, " +
                              std::to_string(g.n_omega) + ")");
          cfg.setup.sources.push_back(all[k]);
        }
      }
    }
  }

  {
    const json& tf = root.raw("test_functions");
    json& tout = root.out()["test_functions"];
    tout = json::array();
    cfg.setup.tests.clear();
    if (tf.is_null()) {
      json empty;
      cfg.setup.tests.push_back(read_test(Reader(empty, "test_functions[0]", tout.emplace_back())));
    } else {
      if (!tf.is_array() || tf.empty())
        throw ConfigError("test_functions: expected a non-empty array of test function objects");
      for (std::size_t i = 0; i < tf.size(); ++i)
        cfg.setup.tests.push_back(
            read_test(Reader(tf[i], "test_functions[" + std::to_string(i) + "]", tout.emplace_back())));
    }
  }

  cfg.setup.t_stop = root.optional_number("t_stop");
  if (cfg.setup.t_stop && !(*cfg.setup.t_stop > 0.0)) throw ConfigError("t_stop: must be > 0");
  cfg.setup.t_stop_margin = root.positive("t_stop_margin", 1.5);
  cfg.epsilon = root.positive("epsilon", 1.0);
  cfg.epsilons = root.numbers("epsilons", full_scale ? std::vector<double>{0.125, 0.25, 0.5, 1.0, 4.0}
                                                : std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0});
  check_epsilons(cfg.epsilons, "epsilons");
  cfg.probes = root.numbers("probes", {});
  for (double p : cfg.probes)
    if (p < 0.0) throw ConfigError("probes: times must be >= 0");
  cfg.setup.solver.snapshot_times = cfg.probes;
  const long jobs = root.integer("jobs", 1);
  if (jobs < 1) throw ConfigError("jobs: must be >= 1");
  cfg.setup.jobs = static_cast<int>(jobs);

  {
    Reader r = root.child("sweep");
    cfg.sweep.norm = r.choice("norm", "max", {"max", "l1_time"}) == "max" ? SweepNorm::max : SweepNorm::l1_time;
    cfg.sweep.lambda_grid = r.boolean("lambda_grid", true);
    cfg.sweep.lambda_stride = static_cast<int>(r.integer("lambda_stride", 1));
    if (cfg.sweep.lambda_stride < 1) throw ConfigError(r.where("lambda_stride") + ": must be >= 1");
    r.finish();
  }
  {
    Reader r = root.child("landscape");
    auto& l = cfg.landscape;
    l.a = r.number("a", l.a);
    l.b_min = r.number("b_min", l.b_min);
    l.b_max = r.number("b_max", l.b_max);
    l.n_points = static_cast<int>(r.integer("n_points", l.n_points));
    if (l.n_points < 2) throw ConfigError(r.where("n_points") + ": must be >= 2");
    if (!(l.b_max > l.b_min)) throw ConfigError(r.where("b_max") + ": must exceed b_min");
    r.finish();
  }
  {
    Reader r = root.child("reconstruct");
    auto& rc = cfg.reconstruct;
    rc.a0 = r.number("a0", rc.a0);
    rc.b0 = r.number("b0", rc.b0);
    auto& o = rc.options;
    o.learning_rate = r.positive("learning_rate", o.learning_rate);
    o.max_iter = static_cast<int>(r.integer("max_iter", o.max_iter));
    o.grad_tol = r.number("grad_tol", o.grad_tol);
    o.loss_tol = r.number("loss_tol", o.loss_tol);
    o.max_step = r.number("max_step", o.max_step);
    o.fd_relative_step = r.positive("fd_relative_step", o.fd_relative_step);
    o.divergence_window = static_cast<int>(r.integer("divergence_window", o.divergence_window));
    if (o.max_iter < 0) throw ConfigError(r.where("max_iter") + ": must be >= 0");
    if (o.max_step < 0.0) throw ConfigError(r.where("max_step") + ": must be >= 0");
    if (o.divergence_window < 1) throw ConfigError(r.where("divergence_window") + ": must be >= 1");
    r.finish();
  }
  {
    Reader r = root.child("decompose");
    auto& d = cfg.decompose;
    d.mode = r.choice("mode", "split", {"split", "scaling"}) == "split" ? DecomposeSettings::Mode::split
                                                                      : DecomposeSettings::Mode::scaling;
    d.thetas = r.numbers("thetas", d.thetas);
    d.theta_mu_ratio = r.positive("theta_mu_ratio", d.theta_mu_ratio);
    d.theta_omega_ratio = r.positive("theta_omega_ratio", d.theta_omega_ratio);
    if (d.thetas.empty()) throw ConfigError(r.where("thetas") + ": list is empty");
    for (double t : d.thetas)
      if (!(t > 0.0)) throw ConfigError(r.where("thetas") + ": every theta must be > 0");
    r.finish();
  }
  {
    Reader r = root.child("noise");
    cfg.noise.level = r.number("level", 0.0);
    const long seed = r.integer("seed", 0);
    if (cfg.noise.level < 0.0) throw ConfigError(r.where("level") + ": must be >= 0");
    if (seed < 0) throw ConfigError(r.where("seed") + ": must be >= 0");
    cfg.noise.seed = static_cast<std::uint64_t>(seed);
    r.finish();
  }
  root.finish();
  cfg.resolved_json = out.dump(2);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void apply_overrides(RunConfig& cfg, std::optional<int> jobs, std::optional<std::uint64_t> seed) {
  json tree = json::parse(cfg.resolved_json);
  if (jobs) {
    if (*jobs < 1) throw ConfigError("--jobs: must be >= 1");
    cfg.setup.jobs = *jobs;
    tree["jobs"] = *jobs;
  }
  if (seed) {
    cfg.noise.seed = *seed;
    tree["noise"]["seed"] = *seed;
  }
  cfg.resolved_json = tree.dump(2);
}

}  // namespace phonon
