#include "dcl/report.hpp"

#include "dcl/format.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace dcl {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string CsvTable::text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string plot_data(const std::vector<double>& x, const std::vector<double>& y, const std::string& comment) {
  std::ostringstream os;
  os << "# " << comment << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) os << format_number(x[i]) << ' ' << format_number(y[i]) << '\n';
  return os.str();
}

Json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return round12(x);
}

Json to_json(const TailExtrapolation& t) {
  return Json{{"limit", number(t.limit)},
              {"ratio", number(t.ratio)},
              {"exponent", number(t.exponent)},
              {"extrapolated", t.extrapolated},
              {"clamped_to_zero", t.clamped}};
}

Json to_json(const CapacityEstimate& e) {
  Json hoods = Json::array();
  for (const auto& n : e.neighbourhoods) {
    hoods.push_back(Json{{"index", n.index},
                         {"epsilon", number(n.epsilon)},
                         {"constrained_nodes", n.constrained_nodes},
                         {"skipped", n.skipped},
                         {"value", number(n.value)},
                         {"residual", number(n.residual)},
                         {"converged", n.converged},
                         {"method", n.method}});
  }
  return Json{{"neighbourhoods", hoods}, {"tail", to_json(e.tail)}, {"warnings", e.warnings}};
}

Json to_json(const SweepResult& s) {
  Json levels = Json::array();
  for (const auto& l : s.levels) {
    levels.push_back(Json{{"mesh_level", l.n_elements}, {"h", number(l.h)}, {"estimate", to_json(l.estimate)}});
  }
  return Json{{"levels", levels}, {"tail", to_json(s.tail)}, {"verdict", to_string(s.verdict)}};
}

Json to_json(const VerdictReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json q = Json::object();
    for (const auto& [k, v] : l.quantities) q[k] = number(v);
    levels.push_back(Json{{"mesh_level", l.n_elements}, {"h", number(l.h)}, {"quantities", q}});
  }
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json vals = Json::array();
    for (double v : c.per_level) vals.push_back(number(v));
    conds.push_back(Json{{"name", c.name},
                         {"measure", c.measure},
                         {"per_level", vals},
                         {"tail", to_json(c.tail)},
                         {"truth", to_string(c.truth)}});
  }
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"informational", c.informational}, {"detail", c.detail}});
  }
  return Json{{"scenario", r.scenario_id},
              {"operation", r.operation},
              {"failed", r.failed()},
              {"inconclusive", r.inconclusive()},
              {"levels", levels},
              {"conditions", conds},
              {"checks", checks},
              {"notes", r.notes}};
}

CsvTable capacity_table(const std::vector<SweepLevel>& levels, const std::string& verdict) {
  CsvTable t{{"mesh_level", "h", "neighborhood_index", "epsilon", "value", "extrapolated", "verdict"}, {}};
  for (const auto& l : levels) {
    for (const auto& n : l.estimate.neighbourhoods) {
      t.rows.push_back({std::to_string(l.n_elements), format_number(l.h), std::to_string(n.index),
                        format_number(n.epsilon), n.skipped ? "skipped" : format_number(n.value),
                        format_number(l.estimate.limit()), verdict});
    }
  }
  return t;
}

CsvTable verdict_table(const std::vector<VerdictReport>& reports) {
  CsvTable t{{"scenario", "operation", "kind", "name", "value", "detail"}, {}};
  for (const auto& r : reports) {
    for (const auto& c : r.conditions) {
      t.rows.push_back({r.scenario_id, r.operation, "condition", c.name, to_string(c.truth),
                        "limit " + format_number(c.tail.limit) + "; per level " + format_list(c.per_level)});
    }
    for (const auto& c : r.checks) {
      t.rows.push_back({r.scenario_id, r.operation, c.informational ? "info" : "check", c.name,
                        c.passed ? "pass" : "fail", c.detail});
    }
  }
  return t;
}

}  // namespace dcl
