#include "dcl/config.hpp"

#include "dcl/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dcl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const Setting& at, const std::string& key, const std::string& msg) {
  throw ConfigError(at.origin + ": " + key + ": " + msg);
}

std::string unquote(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> list_items(const std::string& raw) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw InvalidArgument("unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> items;
  if (trim(v).empty()) return items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(unquote(item));
  return items;
}

double to_real(const std::string& s) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("expected a number, got '" + t + "'");
  }
  if (used != t.size()) throw InvalidArgument("expected a number, got '" + t + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_real(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidArgument("expected an integer, got '" + trim(s) + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
  const std::string t = unquote(s);
  if (t == "true") return true;
  if (t == "false") return false;
  throw InvalidArgument("expected true or false, got '" + t + "'");
}

std::optional<bool> to_expectation(const std::string& s) {
  const std::string t = unquote(s);
  if (t == "unknown") return std::nullopt;
  return to_bool(t);
}

double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
  return v;
}

void apply(RunConfig& c, const std::string& key, const Setting& at) {
  const std::string& raw = at.value;
  try {
    Scenario& s = c.spec;
    if (key == "scenario") {
      c.scenario_id = unquote(raw);
      if (auto found = find_scenario(c.scenario_id)) {
        s = *found;
      } else {
        const auto sp = special_scenarios();
        if (std::find(sp.begin(), sp.end(), c.scenario_id) == sp.end()) {
          throw InvalidArgument("unknown scenario '" + c.scenario_id + "' (see the catalog subcommand)");
        }
      }
    } else if (key == "id") {
      s.id = unquote(raw);
    } else if (key == "description") {
      s.description = unquote(raw);
    } else if (key == "domain") {
      const auto items = list_items(raw);
      if (items.size() != 2) throw InvalidArgument("domain needs two endpoints");
      s.domain = {to_real(items[0]), to_real(items[1])};
      if (!(s.domain.lo < s.domain.hi)) throw InvalidArgument("domain must have lo < hi");
    } else if (key == "coeff") {
      s.coefficient = CoefficientSpec::parse(unquote(raw));
    } else if (key == "omega") {
      s.region.omega = OpenSet::parse(unquote(raw));
    } else if (key == "target") {
      s.region.target = TargetSet::parse(unquote(raw));
    } else if (key == "radii") {
      s.region.radii.clear();
      for (const auto& x : list_items(raw)) s.region.radii.push_back(to_real(x));
    } else if (key == "levels") {
      s.levels.clear();
      for (const auto& x : list_items(raw)) s.levels.push_back(to_int(x));
    } else if (key == "times") {
      s.times.clear();
      for (const auto& x : list_items(raw)) s.times.push_back(positive(to_real(x), "times"));
    } else if (key == "mass") {
      const std::string m = unquote(raw);
      if (m == "lumped") s.mass = MassKind::lumped;
      else if (m == "consistent") s.mass = MassKind::consistent;
      else throw InvalidArgument("mass must be lumped or consistent");
    } else if (key == "grading") {
      const std::string g = unquote(raw);
      if (g == "uniform") s.grading.kind = GradingKind::uniform;
      else if (g == "geometric") s.grading.kind = GradingKind::geometric;
      else throw InvalidArgument("grading must be uniform or geometric");
    } else if (key == "grading_ratio") {
      s.grading.ratio = positive(to_real(raw), "grading_ratio");
    } else if (key == "grading_points") {
      s.grading.points.clear();
      for (const auto& x : list_items(raw)) s.grading.points.push_back(to_real(x));
    } else if (key == "expect_conservative") {
      s.expect_conservative = to_expectation(raw);
    } else if (key == "expect_invariant") {
      s.expect_invariant = to_expectation(raw);
    } else if (key == "expect_capacity_zero") {
      s.expect_capacity_zero = to_expectation(raw);
    } else if (key == "expect_source") {
      s.expect_source = unquote(raw);
    } else if (key == "tol_capacity") {
      c.thresholds.tol_capacity = positive(to_real(raw), "tol_capacity");
    } else if (key == "tol_pos") {
      c.thresholds.tol_pos = positive(to_real(raw), "tol_pos");
    } else if (key == "zero_threshold") {
      c.thresholds.zero_threshold = positive(to_real(raw), "zero_threshold");
    } else if (key == "true_below") {
      c.thresholds.true_below = positive(to_real(raw), "true_below");
    } else if (key == "false_above") {
      c.thresholds.false_above = positive(to_real(raw), "false_above");
    } else if (key == "out") {
      c.out_dir = unquote(raw);
    } else if (key == "format") {
      const std::string f = unquote(raw);
      if (f == "csv") c.format = OutputFormat::csv;
      else if (f == "json") c.format = OutputFormat::json;
      else if (f == "both") c.format = OutputFormat::both;
      else throw InvalidArgument("format must be csv, json or both");
    } else if (key == "operator") {
      c.evolve_operator = unquote(raw);
      if (c.evolve_operator != "free" && c.evolve_operator != "dirichlet" && c.evolve_operator != "neumann") {
        throw InvalidArgument("operator must be free, dirichlet or neumann");
      }
    } else if (key == "initial") {
      c.evolve_initial = unquote(raw);
    } else if (key == "method") {
      c.method = unquote(raw);
      if (c.method != "automatic" && c.method != "eigendecomposition" && c.method != "resolvent_power") {
        throw InvalidArgument("method must be automatic, eigendecomposition or resolvent_power");
      }
    } else if (key == "export") {
      c.export_dir = unquote(raw);
    } else {
      throw InvalidArgument("unknown key");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(at, key, e.what());
  }
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  if (name == "capacity") return Subcommand::capacity;
  if (name == "evolve") return Subcommand::evolve;
  if (name == "verify") return Subcommand::verify;
  if (name == "sweep") return Subcommand::sweep;
  if (name == "catalog") return Subcommand::catalog;
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string to_string(Subcommand c) {
  switch (c) {
    case Subcommand::capacity: return "capacity";
    case Subcommand::evolve: return "evolve";
    case Subcommand::verify: return "verify";
    case Subcommand::sweep: return "sweep";
    case Subcommand::catalog: return "catalog";
  }
  return "verify";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "id", "description", "domain", "coeff", "omega", "target", "radii", "levels", "times",
      "mass", "grading", "grading_ratio", "grading_points", "expect_conservative", "expect_invariant",
      "expect_capacity_zero", "expect_source", "tol_capacity", "tol_pos", "zero_threshold", "true_below",
      "false_above", "out", "format", "operator", "initial", "method", "export"};
  return keys;
}

std::vector<std::pair<std::string, Setting>> parse_config_text(const std::string& text, const std::string& name) {
  std::vector<std::pair<std::string, Setting>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++lineno;
    const std::string origin = name + ":" + std::to_string(lineno);
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(origin + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(origin + ": " + key + ": missing value");
    if (value.front() == '"' && (value.size() < 2 || value.back() != '"')) {
      throw ConfigError(origin + ": " + key + ": unterminated string");
    }
    if (value.front() == '[' && value.back() != ']') throw ConfigError(origin + ": " + key + ": unterminated list");
    for (const auto& [k, s] : out) {
      if (k == key) throw ConfigError(origin + ": duplicate key '" + key + "' (first at " + s.origin + ")");
    }
    out.push_back({key, {value, origin}});
  }
  return out;
}

std::vector<std::pair<std::string, Setting>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void RunConfig::validate() const {
  const auto sp = special_scenarios();
  const bool special = std::find(sp.begin(), sp.end(), scenario_id) != sp.end();
  try {
    if (!special) spec.validate();
    else if (spec.levels.empty()) throw InvalidArgument("no mesh levels");
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  }
  for (std::size_t i = 1; i < spec.levels.size(); ++i) {
    if (spec.levels[i] <= spec.levels[i - 1]) throw ConfigError("levels must strictly increase");
  }
  if (!(thresholds.true_below < thresholds.false_above)) throw ConfigError("true_below must be below false_above");
  if (command == Subcommand::sweep && spec.levels.size() < 3) throw ConfigError("sweep needs at least 3 levels");
  if (out_dir.empty()) throw ConfigError("out: empty output directory");
}

RunConfig build_config(Subcommand command, const std::vector<std::pair<std::string, Setting>>& file,
                       const std::vector<std::pair<std::string, Setting>>& flags) {
  RunConfig c;
  c.command = command;
  c.spec.id = "inline";
  c.spec.description = "inline configuration";
  // A scenario selection replaces the whole spec, so it is applied before
  // any other key from the same or a lower-precedence source.
  auto scenario_of = [](const std::vector<std::pair<std::string, Setting>>& v) -> const Setting* {
    for (const auto& [k, s] : v) {
      if (k == "scenario") return &s;
    }
    return nullptr;
  };
  const Setting* sc = scenario_of(flags);
  if (!sc) sc = scenario_of(file);
  if (sc) apply(c, "scenario", *sc);
  for (const auto* src : {&file, &flags}) {
    for (const auto& [k, s] : *src) {
      if (k != "scenario") apply(c, k, s);
    }
  }
  c.validate();
  return c;
}

std::string scenario_to_config(const Scenario& s) {
  std::ostringstream os;
  auto expect = [](const std::optional<bool>& e) { return e ? (*e ? "true" : "false") : "\"unknown\""; };
  os << "id = \"" << s.id << "\"\n";
  os << "description = \"" << s.description << "\"\n";
  os << "domain = [" << format_number(s.domain.lo) << ", " << format_number(s.domain.hi) << "]\n";
  os << "coeff = \"" << s.coefficient.tag() << "\"\n";
  os << "omega = \"" << s.region.omega.text() << "\"\n";
  os << "target = \"" << s.region.target.text() << "\"\n";
  if (!s.region.radii.empty()) os << "radii = [" << format_list(s.region.radii) << "]\n";
  os << "levels = [";
  for (std::size_t i = 0; i < s.levels.size(); ++i) os << (i ? ", " : "") << s.levels[i];
  os << "]\n";
  os << "times = [" << format_list(s.times) << "]\n";
  os << "mass = \"" << (s.mass == MassKind::lumped ? "lumped" : "consistent") << "\"\n";
  if (s.grading.kind == GradingKind::geometric) {
    os << "grading = \"geometric\"\n";
    os << "grading_ratio = " << format_number(s.grading.ratio) << "\n";
    os << "grading_points = [" << format_list(s.grading.points) << "]\n";
  }
  os << "expect_conservative = " << expect(s.expect_conservative) << "\n";
  os << "expect_invariant = " << expect(s.expect_invariant) << "\n";
  os << "expect_capacity_zero = " << expect(s.expect_capacity_zero) << "\n";
  if (!s.expect_source.empty()) os << "expect_source = \"" << s.expect_source << "\"\n";
  return os.str();
}

}  // namespace dcl
