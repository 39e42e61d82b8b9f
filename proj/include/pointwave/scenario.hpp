#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pointwave/pde_direct.hpp"
#include "pointwave/reduced_ode.hpp"
#include "pointwave/types.hpp"
#include "pointwave/volterra.hpp"

namespace pointwave {

/// Flat key-value scenario store: one `section.key = value` per line,
/// `#` comments, blank lines ignored. Keys are consumed by typed getters;
/// anything left unconsumed is reported as an error with its line number.
class KeyValues {
 public:
  static KeyValues from_file(const std::string& path);
  static KeyValues from_string(const std::string& text);

  void override_value(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  std::size_t get_size(const std::string& key, std::size_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key);  // space/comma split

  /// Throws ConfigError listing any keys never consumed.
  void check_all_consumed() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };
  std::map<std::string, Entry> entries_;

  Entry* find(const std::string& key);
};

enum class SolverChoice { reduced, pde, kernel, closed };

/// A fully built scenario: model, parameters, initial data, forcing,
/// integration grid, optional grid-solver scheme and kernel settings.
struct Scenario {
  ModelKind model = ModelKind::first;
  bool kernel_model = false;  // `model = kernel` (non-local first model)
  SolverChoice solver = SolverChoice::reduced;

  OscillatorParams params;
  FieldConfig cfg;
  InitialData init;
  Forcing forcing;
  TimeGrid grid;

  bool has_scheme = false;
  GridScheme scheme;

  std::string kernel_family = "dirac";  // dirac | gaussian | bump
  double kernel_width = 0.1;

  bool output_qdot = true;
  std::vector<double> field_times;

  double compare_tol_ode = 1e-5;
  double compare_tol_pde = 5e-3;
  std::vector<std::string> compare_solvers;  // empty = auto

  // Scenario-level facts used to decide solver applicability.
  bool forcing_is_zero = true;
  bool field_init_is_zero = true;

  static Scenario build(KeyValues& kv);
  static Scenario load(const std::string& path);
  static Scenario parse(const std::string& text);

  Mollifier make_mollifier() const;
  ReducedSystem make_system() const;
  /// True when the closed-form homogeneous solution applies: first model,
  /// no forcing, field at rest, c = 1, s = 0, x0 = 0.
  bool closed_form_applies() const;
};

}  // namespace pointwave
