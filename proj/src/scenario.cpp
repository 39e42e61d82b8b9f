#include "pointwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pointwave/profiles.hpp"

namespace pointwave {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues KeyValues::from_string(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected `key = value`, got `" + line + "`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": empty key or value");
    if (kv.entries_.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key `" +
                        key + "`");
    kv.entries_[key] = Entry{value, line_no, false};
  }
  return kv;
}

KeyValues KeyValues::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

void KeyValues::override_value(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0, false};
}

KeyValues::Entry* KeyValues::find(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.consumed = true;
  return &it->second;
}

bool KeyValues::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string KeyValues::get_string(const std::string& key,
                                  const std::string& fallback) {
  Entry* e = find(key);
  return e ? e->value : fallback;
}

double KeyValues::get_double(const std::string& key, double fallback) {
  Entry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(e->line) + ": field `" + key +
                      "`: cannot parse number from `" + e->value + "`");
  }
}

std::size_t KeyValues::get_size(const std::string& key, std::size_t fallback) {
  const double v = get_double(key, static_cast<double>(fallback));
  if (v < 0.0 || v != std::floor(v))
    throw ConfigError("field `" + key + "` must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) {
  Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ConfigError("line " + std::to_string(e->line) + ": field `" + key +
                    "`: expected a boolean, got `" + e->value + "`");
}

std::vector<double> KeyValues::get_doubles(const std::string& key) {
  Entry* e = find(key);
  std::vector<double> out;
  if (!e) return out;
  std::string value = e->value;
  std::replace(value.begin(), value.end(), ',', ' ');
  std::istringstream in(value);
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof())
    throw ConfigError("line " + std::to_string(e->line) + ": field `" + key +
                      "`: cannot parse number list from `" + e->value + "`");
  return out;
}

void KeyValues::check_all_consumed() const {
  std::string unknown;
  for (const auto& [key, entry] : entries_) {
    if (!entry.consumed) {
      if (!unknown.empty()) unknown += ", ";
      unknown += "`" + key + "` (line " + std::to_string(entry.line) + ")";
    }
  }
  if (!unknown.empty()) throw ConfigError("unknown scenario keys: " + unknown);
}

Scenario Scenario::build(KeyValues& kv) {
  Scenario sc;

  const std::string model = kv.get_string("model", "first");
  if (model == "first") {
    sc.model = ModelKind::first;
  } else if (model == "standard") {
    sc.model = ModelKind::standard;
  } else if (model == "kernel") {
    sc.model = ModelKind::first;
    sc.kernel_model = true;
  } else {
    throw ConfigError("field `model`: expected first|standard|kernel, got `" +
                      model + "`");
  }

  const std::string solver = kv.get_string("solver", sc.kernel_model ? "kernel"
                                                                     : "reduced");
  if (solver == "reduced") sc.solver = SolverChoice::reduced;
  else if (solver == "pde") sc.solver = SolverChoice::pde;
  else if (solver == "kernel") sc.solver = SolverChoice::kernel;
  else if (solver == "closed") sc.solver = SolverChoice::closed;
  else
    throw ConfigError("field `solver`: expected reduced|pde|kernel|closed, got `" +
                      solver + "`");
  if (sc.kernel_model && sc.solver != SolverChoice::kernel)
    throw ConfigError("model = kernel runs only with solver = kernel");
  if (!sc.kernel_model && sc.solver == SolverChoice::kernel)
    throw ConfigError("solver = kernel requires model = kernel");

  sc.params.omega = kv.get_double("params.omega", 1.0);
  sc.params.gamma = kv.get_double("params.gamma", 0.0);
  sc.params.gamma1 = kv.get_double("params.gamma1", 0.0);
  sc.params.gamma2 = kv.get_double("params.gamma2", 0.0);
  sc.params.validate();

  sc.cfg.c = kv.get_double("field.c", 1.0);
  sc.cfg.x0 = kv.get_double("field.x0", 0.0);
  sc.cfg.s = kv.get_double("field.s", 0.0);
  sc.cfg.x_min = kv.get_double("field.x_min", sc.cfg.x0 - 1.0);
  sc.cfg.x_max = kv.get_double("field.x_max", sc.cfg.x0 + 1.0);
  sc.cfg.validate();

  const std::string profile = kv.get_string("init.field", "zero");
  if (profile == "zero") {
    sc.init = InitialData::rest();
    sc.field_init_is_zero = true;
  } else if (profile == "gaussian_pulse") {
    sc.init = gaussian_pulse(kv.get_double("init.amplitude", 1.0),
                             kv.get_double("init.center", sc.cfg.x0),
                             kv.get_double("init.width", 1.0));
    sc.field_init_is_zero = false;
  } else if (profile == "incident_sine") {
    sc.init = incident_sine(kv.get_double("init.amplitude", 1.0),
                            kv.get_double("init.wavenumber", 1.0), sc.cfg);
    sc.field_init_is_zero = false;
  } else if (profile == "table") {
    const std::string path = kv.get_string("init.table_file", "");
    if (path.empty()) throw ConfigError("init.field = table needs init.table_file");
    sc.init = table_profile(path);
    sc.field_init_is_zero = false;
  } else {
    throw ConfigError(
        "field `init.field`: expected zero|gaussian_pulse|incident_sine|table, "
        "got `" + profile + "`");
  }
  sc.init.q_init = kv.get_double("init.q", 0.0);
  sc.init.qdot_init = kv.get_double("init.qdot", 0.0);

  const std::string f0 = kv.get_string("forcing.f0", "zero");
  const double f0_amp = kv.get_double("forcing.f0_amplitude", 0.0);
  const double f0_freq = kv.get_double("forcing.f0_frequency", 1.0);
  if (f0 == "zero") {
  } else if (f0 == "constant") {
    sc.forcing.f0 = [f0_amp](double) { return f0_amp; };
    sc.forcing_is_zero = false;
  } else if (f0 == "sine") {
    sc.forcing.f0 = [f0_amp, f0_freq](double t) {
      return f0_amp * std::sin(f0_freq * t);
    };
    sc.forcing_is_zero = false;
  } else {
    throw ConfigError("field `forcing.f0`: expected zero|constant|sine, got `" +
                      f0 + "`");
  }

  const std::string f1 = kv.get_string("forcing.f1", "zero");
  const double f1_amp = kv.get_double("forcing.f1_amplitude", 0.0);
  const double f1_freq = kv.get_double("forcing.f1_frequency", 1.0);
  if (f1 == "zero") {
  } else if (f1 == "sine_t") {
    // Uniform in x: f1(t,x) = amp sin(freq t), primitive amp sin(freq t) x.
    sc.forcing.f1 = [f1_amp, f1_freq](double t, double) {
      return f1_amp * std::sin(f1_freq * t);
    };
    sc.forcing.f1_primitive = [f1_amp, f1_freq](double t, double x) {
      return f1_amp * std::sin(f1_freq * t) * x;
    };
    sc.forcing_is_zero = false;
  } else {
    throw ConfigError("field `forcing.f1`: expected zero|sine_t, got `" + f1 +
                      "`");
  }

  sc.grid = TimeGrid(sc.cfg.s, kv.get_double("grid.t_end", sc.cfg.s + 10.0),
                     kv.get_double("grid.dt", 1e-3));

  sc.has_scheme = kv.has("pde.dx");
  sc.scheme.dx = kv.get_double("pde.dx", 1e-2);
  sc.scheme.courant = kv.get_double("pde.courant", 1.0);
  const std::string source = kv.get_string("pde.source", "characteristics_exact");
  if (source == "characteristics_exact")
    sc.scheme.source_model = SourceModel::characteristics_exact;
  else if (source == "nearest_node")
    sc.scheme.source_model = SourceModel::nearest_node;
  else
    throw ConfigError(
        "field `pde.source`: expected characteristics_exact|nearest_node, got `" +
        source + "`");
  sc.scheme.snapshot_stride = kv.get_size("pde.snapshot_stride", 0);
  if (sc.solver == SolverChoice::pde && !sc.has_scheme)
    throw ConfigError("solver = pde needs pde.dx");

  sc.kernel_family = kv.get_string("kernel.family", "dirac");
  if (sc.kernel_family != "dirac" && sc.kernel_family != "gaussian" &&
      sc.kernel_family != "bump")
    throw ConfigError("field `kernel.family`: expected dirac|gaussian|bump, got `" +
                      sc.kernel_family + "`");
  sc.kernel_width = kv.get_double("kernel.width", 0.1);

  sc.output_qdot = kv.get_bool("output.qdot", true);
  sc.field_times = kv.get_doubles("output.field_times");

  sc.compare_tol_ode = kv.get_double("compare.tol_ode", 1e-5);
  sc.compare_tol_pde = kv.get_double("compare.tol_pde", 5e-3);
  {
    std::istringstream in(kv.get_string("compare.solvers", ""));
    std::string token;
    while (in >> token) sc.compare_solvers.push_back(token);
  }

  kv.check_all_consumed();
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  KeyValues kv = KeyValues::from_file(path);
  return build(kv);
}

Scenario Scenario::parse(const std::string& text) {
  KeyValues kv = KeyValues::from_string(text);
  return build(kv);
}

Mollifier Scenario::make_mollifier() const {
  if (kernel_family == "gaussian") return Mollifier::gaussian(kernel_width);
  if (kernel_family == "bump") return Mollifier::bump(kernel_width);
  return Mollifier::step();
}

ReducedSystem Scenario::make_system() const {
  if (model == ModelKind::standard)
    return ReducedSystem::standard_model(params, cfg, init, forcing);
  return ReducedSystem::first_model(params, cfg, init, forcing);
}

bool Scenario::closed_form_applies() const {
  return model == ModelKind::first && !kernel_model && forcing_is_zero &&
         field_init_is_zero && std::abs(cfg.c - 1.0) < 1e-12 &&
         std::abs(cfg.s) < 1e-12 && std::abs(cfg.x0) < 1e-12;
}

}  // namespace pointwave
