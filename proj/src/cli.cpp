#include "dcl/cli.hpp"

#include "dcl/battery.hpp"
#include "dcl/format.hpp"
#include "dcl/parallel.hpp"
#include "dcl/report.hpp"
#include "dcl/semigroup.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace dcl {

namespace {

namespace fs = std::filesystem;

struct Output {
  const RunConfig& cfg;
  bool csv() const { return cfg.format != OutputFormat::json; }
  bool json() const { return cfg.format != OutputFormat::csv; }
  void write(const std::string& name, const std::string& content) const {
    write_atomic(fs::path(cfg.out_dir) / name, content);
  }
};

std::string safe_name(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return s;
}

int combine(const std::vector<VerdictReport>& reports) {
  bool failed = false, inconclusive = false;
  for (const auto& r : reports) {
    failed = failed || r.failed();
    inconclusive = inconclusive || r.inconclusive();
  }
  if (failed) return exit_failure;
  return inconclusive ? exit_inconclusive : exit_ok;
}

int run_catalog(const RunConfig& cfg, std::ostream& out) {
  const Output o{cfg};
  CsvTable t{{"id", "coeff", "omega", "target", "levels", "expect_conservative", "expect_invariant",
              "expect_capacity_zero", "description"},
             {}};
  Json list = Json::array();
  auto e = [](const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : "unknown"; };
  for (const Scenario& s : scenario_catalog()) {
    std::string levels;
    for (std::size_t i = 0; i < s.levels.size(); ++i) levels += (i ? ";" : "") + std::to_string(s.levels[i]);
    t.rows.push_back({s.id, s.coefficient.tag(), s.region.omega.text(), s.region.target.text(), levels,
                      e(s.expect_conservative), e(s.expect_invariant), e(s.expect_capacity_zero), s.description});
    list.push_back(Json{{"id", s.id}, {"coeff", s.coefficient.tag()}, {"omega", s.region.omega.text()},
                        {"target", s.region.target.text()}, {"description", s.description}});
    out << s.id << "  " << s.description << '\n';
    if (!cfg.export_dir.empty()) write_atomic(fs::path(cfg.export_dir) / (s.id + ".toml"), scenario_to_config(s));
  }
  for (const std::string& s : special_scenarios()) out << s << "  (built-in verification)\n";
  if (o.csv()) o.write("catalog.csv", t.text());
  if (o.json()) o.write("catalog.json", list.dump(2) + "\n");
  return exit_ok;
}

int run_capacity(const RunConfig& cfg, std::ostream& out, bool sweep) {
  const Output o{cfg};
  const Scenario& s = cfg.spec;
  CapacityOptions copt;
  copt.tol = cfg.thresholds.tol_capacity;
  copt.zero_threshold = cfg.thresholds.zero_threshold;
  SweepResult result;
  if (s.levels.size() >= 3) {
    result = refinement_sweep([&](int n) { return s.free_form(n); }, s.levels, s.region, copt, cfg.threads);
  } else {
    for (int n : s.levels) {
      const FormPair f = s.free_form(n);
      result.levels.push_back({n, f.mesh.max_element_length(), relative_capacity(f, s.region, copt)});
    }
    result.tail = richardson_tail(result.level_values(), copt.zero_threshold);
  }
  const bool judged = s.levels.size() >= 3;
  const std::string verdict = judged ? to_string(result.verdict) : "insufficient_levels";
  const std::string stem = sweep ? "sweep" : "capacity";
  if (o.csv()) o.write(stem + ".csv", capacity_table(result.levels, verdict).text());
  if (o.json()) {
    Json j{{"scenario", s.id}, {"operation", stem}, {"coeff", s.coefficient.tag()}, {"omega", s.region.omega.text()},
           {"target", s.region.target.text()}, {"result", to_json(result)}};
    o.write(stem + ".json", j.dump(2) + "\n");
  }
  std::vector<double> hs;
  for (const auto& l : result.levels) hs.push_back(l.h);
  o.write(stem + "_plot.dat", plot_data(hs, result.level_values(), "h  extrapolated capacity (" + s.id + ")"));
  for (const auto& l : result.levels) {
    out << "level " << l.n_elements << "  h=" << format_number(l.h) << "  cap=" << format_number(l.estimate.limit())
        << '\n';
    for (const auto& w : l.estimate.warnings) out << "  warning: " << w << '\n';
  }
  out << "limit " << format_number(result.tail.limit) << "  verdict " << verdict << '\n';
  if (!sweep) return exit_ok;
  if (result.verdict == CapacityVerdict::inconclusive) return exit_inconclusive;
  if (s.expect_capacity_zero && *s.expect_capacity_zero != (result.verdict == CapacityVerdict::zero)) {
    out << "verdict contradicts expect_capacity_zero\n";
    return exit_failure;
  }
  return exit_ok;
}

int run_evolve(const RunConfig& cfg, std::ostream& out) {
  const Output o{cfg};
  const Scenario& s = cfg.spec;
  const FormPair free = s.free_form(s.levels.back());
  const Mesh& mesh = free.mesh;
  FormPair gen = free;
  if (cfg.evolve_operator == "dirichlet") gen = restrict_dirichlet(free, s.region);
  else if (cfg.evolve_operator == "neumann") gen = neumann_form(free, s.region).form;
  SemigroupMethod method = SemigroupMethod::automatic;
  if (cfg.method == "eigendecomposition") method = SemigroupMethod::eigendecomposition;
  if (cfg.method == "resolvent_power") method = SemigroupMethod::resolvent_power;
  const SemigroupOperator S(gen, method);

  std::optional<Vector> phi;
  for (const auto& tf : standard_battery()) {
    if (tf.name == cfg.evolve_initial) phi = sample(mesh, tf.f);
  }
  if (cfg.evolve_initial == "indicator") phi = indicator(mesh, s.region.omega);
  if (!phi) throw ConfigError("initial: unknown test function '" + cfg.evolve_initial + "'");

  CsvTable trace{{"t", "node", "x", "value"}, {}};
  Json records = Json::array();
  std::vector<double> masses;
  bool violated = false;
  auto record = [&](double t, const std::string& name, double v) {
    records.push_back(Json{{"scenario", s.id}, {"level", s.levels.back()}, {"operator", cfg.evolve_operator},
                           {"t", number(t)}, {"defect", name}, {"value", number(v)}});
  };
  for (double t : s.times) {
    const EvolutionResult r = S.evolve(t, *phi);
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      trace.rows.push_back({format_number(t), std::to_string(i), format_number(mesh.node(i)),
                            format_number(r.output[static_cast<Index>(i)])});
    }
    record(t, "mass_loss", r.mass_loss);
    record(t, "negativity", r.negativity);
    record(t, "overshoot", r.overshoot);
    const DefectMeasure c = conservativeness_defect(S, s.region, t);
    record(t, "conservativeness_sup", c.sup_norm);
    record(t, "conservativeness_mass", c.mass);
    record(t, "invariance_mass", invariance_defect(S, s.region, t, false).mass);
    masses.push_back(lumped_weights(mesh).dot(r.output));
    if (s.mass == MassKind::lumped && (r.negativity > cfg.thresholds.tol_pos || r.overshoot > cfg.thresholds.tol_pos)) {
      violated = true;
    }
    out << "t=" << format_number(t) << "  mass_loss=" << format_number(r.mass_loss)
        << "  negativity=" << format_number(r.negativity) << "  overshoot=" << format_number(r.overshoot) << '\n';
  }
  if (o.csv()) o.write("evolve_trace.csv", trace.text());
  if (o.json()) o.write("evolve_defects.json", records.dump(2) + "\n");
  o.write("evolve_plot.dat", plot_data(s.times, masses, "t  <1, S_t phi>_M (" + s.id + ", " + cfg.evolve_operator + ")"));
  if (violated) {
    out << "submarkovian bounds violated beyond tol_pos\n";
    return exit_failure;
  }
  return exit_ok;
}

Scenario comparison_variant(const std::string& id, const std::string& coeff) {
  Scenario s = *find_scenario("pow2-half");
  s.id = id;
  s.coefficient = CoefficientSpec::parse(coeff);
  s.description = coeff + " on (-1,1), omega = (0,inf)";
  return s;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const Output o{cfg};
  std::vector<VerdictReport> reports;
  const std::string& id = cfg.scenario_id;
  const Thresholds& th = cfg.thresholds;
  const bool custom_levels = cfg.spec.levels != Scenario{}.levels;
  if (id == "halfline") {
    reports.push_back(custom_levels ? run_halfline_counterexample(th, cfg.spec.levels, cfg.threads)
                                    : run_halfline_counterexample(th, {1024, 2048, 4096}, cfg.threads));
  } else if (id == "disjoint") {
    reports.push_back(custom_levels ? run_disjoint_interval(th, cfg.spec.levels, cfg.threads)
                                    : run_disjoint_interval(th, {512, 1024, 2048}, cfg.threads));
  } else if (id == "comparison-cubic" || id == "comparison-scaled") {
    Scenario second = *find_scenario("pow2-half");
    second.levels = cfg.spec.levels;
    second.times = cfg.spec.times;
    Scenario first = id == "comparison-cubic" ? comparison_variant("pow3-half", "power_law:3")
                                              : comparison_variant("2pow2-half", "2*power_law:2");
    first.levels = second.levels;
    first.times = second.times;
    reports.push_back(run_comparison_criterion(first, second, id == "comparison-cubic" ? 1.0 : 2.0, th, cfg.threads));
  } else if (id == "catalog") {
    std::vector<Scenario> cat = scenario_catalog();
    std::vector<ScenarioMeasurements> ms(cat.size());
    for (auto& s : cat) {
      s.levels = cfg.spec.levels;
      s.times = cfg.spec.times;
    }
    parallel_for(cat.size(), cfg.threads, [&](std::size_t i) { ms[i] = measure(cat[i], th, 1); });
    for (const auto& m : ms) {
      reports.push_back(theorem_1_1_report(m, th));
      reports.push_back(theorem_3_7_report(m, th));
    }
  } else {
    const ScenarioMeasurements m = measure(cfg.spec, th, cfg.threads);
    reports.push_back(theorem_1_1_report(m, th));
    reports.push_back(theorem_3_7_report(m, th));
  }

  Json all = Json::array();
  for (const auto& r : reports) {
    all.push_back(to_json(r));
    out << r.scenario_id << " " << r.operation << ": "
        << (r.failed() ? "FAIL" : (r.inconclusive() ? "INCONCLUSIVE" : "PASS")) << '\n';
    for (const auto& c : r.conditions) {
      out << "  " << c.name << " = " << to_string(c.truth) << "  (limit " << format_number(c.tail.limit) << ")\n";
    }
    for (const auto& c : r.checks) {
      out << "  [" << (c.passed ? "pass" : "FAIL") << (c.informational ? ", info" : "") << "] " << c.name;
      if (!c.detail.empty()) out << ": " << c.detail;
      out << '\n';
    }
    std::vector<double> hs;
    for (const auto& l : r.levels) hs.push_back(l.h);
    for (const auto& c : r.conditions) {
      o.write("verify_" + safe_name(r.scenario_id) + "_" + r.operation + "_" + safe_name(c.name) + ".dat",
              plot_data(hs, c.per_level, "h  " + c.measure));
    }
  }
  if (o.csv()) o.write("verify.csv", verdict_table(reports).text());
  if (o.json()) o.write("verify.json", all.dump(2) + "\n");
  return combine(reports);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Subcommand::catalog: return run_catalog(cfg, out);
    case Subcommand::capacity: return run_capacity(cfg, out, false);
    case Subcommand::sweep: return run_capacity(cfg, out, true);
    case Subcommand::evolve: return run_evolve(cfg, out);
    case Subcommand::verify: return run_verify(cfg, out);
  }
  return exit_config;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Dirichlet-form capacity and semigroup laboratory on 1-D meshes"};
  app.require_subcommand(1);
  app.footer(
      "Precedence: flags > --config file > defaults. Defaults: domain [-1,1], coeff constant:1, omega (-inf,inf),\n"
      "target boundary, levels 256,512,1024, times 0.01,0.05,0.1,0.5, tol-capacity 1e-10, tol-pos 1e-9,\n"
      "zero-threshold 1e-4, out dcl-out, format both. DCL_THREADS caps job parallelism.\n"
      "Exit codes: 0 pass, 1 consistency failure, 2 configuration error, 3 inconclusive only, 4 output failure.");

  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::string>> flag_specs = {
      {"scenario", "catalog id or one of halfline, disjoint, comparison-cubic, comparison-scaled, catalog"},
      {"levels", "mesh levels (elements), e.g. 64,128,256"},
      {"times", "time grid, e.g. 0.01,0.1"},
      {"out", "output directory"},
      {"format", "csv | json | both"},
      {"tol-capacity", "obstacle KKT tolerance"},
      {"tol-pos", "positivity tolerance"},
      {"zero-threshold", "capacity zero threshold"},
      {"domain", "mesh domain, e.g. -1,1"},
      {"coeff", "coefficient, e.g. power_law:2"},
      {"omega", "open set, e.g. (0,inf)"},
      {"target", "target set, e.g. {0} or boundary"},
      {"radii", "neighbourhood radii, decreasing"},
      {"mass", "lumped | consistent"},
      {"operator", "evolve: free | dirichlet | neumann"},
      {"initial", "evolve: one, x, x2, sin_pi_x, abs_x, hat_minus, hat_plus, indicator"},
      {"method", "automatic | eigendecomposition | resolvent_power"},
      {"export", "catalog: directory for scenario files"},
  };
  std::vector<std::optional<std::string>> flag_values(flag_specs.size());

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"capacity", "relative capacity per mesh level"},
      {"evolve", "apply S, S^D or S^N to a test function"},
      {"verify", "run the consistency checks for a scenario"},
      {"sweep", "capacity refinement sweep with a zero/positive verdict"},
      {"catalog", "list built-in scenarios"},
  };
  for (const auto& [name, help] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "TOML-style configuration file");
    for (std::size_t i = 0; i < flag_specs.size(); ++i) {
      sub->add_option("--" + flag_specs[i].first, flag_values[i], flag_specs[i].second);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }
  try {
    const Subcommand cmd = parse_subcommand(app.get_subcommands().front()->get_name());
    std::vector<std::pair<std::string, Setting>> file;
    if (config_path) file = read_config_file(*config_path);
    std::vector<std::pair<std::string, Setting>> flags;
    for (std::size_t i = 0; i < flag_specs.size(); ++i) {
      if (!flag_values[i]) continue;
      std::string key = flag_specs[i].first;
      std::replace(key.begin(), key.end(), '-', '_');
      flags.push_back({key, {*flag_values[i], "--" + flag_specs[i].first}});
    }
    RunConfig cfg = build_config(cmd, file, flags);
    cfg.threads = thread_budget();
    return run(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "dcl: " << e.what() << '\n';
    return exit_config;
  } catch (const InvalidArgument& e) {
    std::cerr << "dcl: " << e.what() << '\n';
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "dcl: " << e.what() << '\n';
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "dcl: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace dcl
