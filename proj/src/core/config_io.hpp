#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/solver_config.hpp"

namespace defog {

// Parsed INI-style run configuration. Sections [prior], [pde] and [stopping]
// override SolverConfig fields; the optional [plan] section describes a
// batch experiment. An empty file yields the stock defaults.
struct PlanFile {
  SolverConfig solver;
  std::vector<std::string> inputs;  // [plan] input=, repeatable
  std::optional<std::vector<double>> fog_levels;
  std::optional<std::vector<std::string>> methods;
  double fog_airlight = 0.9;
  std::optional<std::string> output_dir;
  bool emit_traces = false;
};

// Grammar: `key = value` lines under `[section]` headers; blank lines and
// lines starting with '#' or ';' are ignored; list values are comma
// separated. Unknown sections or keys and malformed values raise PlanError
// with the offending line number.
PlanFile parse_config_text(const std::string& text);

// Reads and parses a file; IoError when unreadable.
PlanFile load_config_file(const std::string& path);

}  // namespace defog
