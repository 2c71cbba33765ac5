#pragma once

#include "dcl/scenario.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcl {

/// Malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { capacity, evolve, verify, sweep, catalog };
enum class OutputFormat { csv, json, both };

Subcommand parse_subcommand(const std::string& name);
std::string to_string(Subcommand c);

struct RunConfig {
  Subcommand command = Subcommand::verify;
  std::string scenario_id;  // catalog id or special name; empty for inline
  Scenario spec;            // inline or resolved catalog scenario
  Thresholds thresholds;
  std::string out_dir = "dcl-out";
  OutputFormat format = OutputFormat::both;
  std::string evolve_operator = "dirichlet";  // free | dirichlet | neumann
  std::string evolve_initial = "one";         // battery function name
  std::string method = "automatic";           // automatic | eigendecomposition | resolvent_power
  std::string export_dir;                     // catalog: write scenario files here
  int threads = 1;

  void validate() const;
};

/// One `key = value` assignment with its origin for diagnostics.
struct Setting {
  std::string value;
  std::string origin;  // "file:line" or "--flag"
};

/// Parses a TOML-style file: `key = value` lines, '#' comments, values as
/// "strings", [lists], numbers or booleans. Unknown keys are rejected.
std::vector<std::pair<std::string, Setting>> read_config_file(const std::string& path);
std::vector<std::pair<std::string, Setting>> parse_config_text(const std::string& text, const std::string& name);

/// Keys accepted in files (flags use the same names with '-' for '_').
const std::vector<std::string>& config_keys();

/// Defaults, then file settings, then flag settings; later wins.
RunConfig build_config(Subcommand command, const std::vector<std::pair<std::string, Setting>>& file,
                       const std::vector<std::pair<std::string, Setting>>& flags);

/// Config-file text that reproduces a scenario.
std::string scenario_to_config(const Scenario& s);

}  // namespace dcl
