// Command-line front end: symbolic verification, field residual checks,
// wavepacket simulation and operator export. Reports are JSON on stdout;
// exit codes: 0 pass, 1 check failure, 2 usage/config error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "tempo/classical.hpp"
#include "tempo/dsl.hpp"
#include "tempo/fw.hpp"
#include "tempo/parallel.hpp"
#include "tempo/scenario.hpp"
#include "tempo/selfcheck.hpp"

namespace {

using nlohmann::json;
using namespace tempo;

struct GlobalOptions {
  std::string config;
  std::string out_dir = ".";
  bool deterministic = false;
  int threads = 1;
};

double now_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void apply_global(GlobalOptions& g) {
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw ConfigError("cannot open config file: " + g.config);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file: not valid JSON");
    if (j.contains("out_dir")) g.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("threads")) g.threads = j.at("threads").get<int>();
    if (j.contains("deterministic"))
      g.deterministic = j.at("deterministic").get<bool>();
  }
  if (g.deterministic) g.threads = 1;
  set_worker_threads(g.threads);
  std::filesystem::create_directories(g.out_dir);
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw ConfigError("cannot write output file: " + name);
  out << content;
}

int run_verify(const GlobalOptions& g, const std::string& fixture_filter,
               bool no_rewrites) {
  auto t0 = std::chrono::steady_clock::now();
  RewriteRuleSet rules =
      no_rewrites ? RewriteRuleSet::none() : RewriteRuleSet::all();

  VerificationReport rep = verify_central_identity(rules);
  std::vector<IdentityCheck> checks = rep.checks;
  if (!no_rewrites) {
    auto props = opcore_selfchecks();
    checks.insert(checks.end(), props.begin(), props.end());
  }
  if (!fixture_filter.empty()) {
    std::erase_if(checks, [&](const IdentityCheck& c) {
      return c.name.find(fixture_filter) == std::string::npos;
    });
    if (checks.empty()) {
      std::cerr << "no checks match fixture filter '" << fixture_filter
                << "'\n";
      return 2;
    }
  }

  bool pass = true;
  json out;
  out["command"] = "verify";
  out["options"] = {{"no_rewrites", no_rewrites},
                    {"fixture", fixture_filter},
                    {"deterministic", g.deterministic},
                    {"threads", g.threads}};
  out["checks"] = json::array();
  for (const auto& c : checks) {
    out["checks"].push_back({{"name", c.name},
                             {"status", c.exact_zero ? "exact-zero" : "mismatch"},
                             {"difference", c.exact_zero ? "0" : c.difference}});
    pass = pass && c.exact_zero;
  }
  out["diagnostics"] = json::array();
  for (const auto& d : rep.diagnostics)
    out["diagnostics"].push_back(
        {{"name", d.name},
         {"status", d.exact_zero ? "exact-zero" : "nonzero"},
         {"difference", d.difference}});
  out["fw_iterations_to_empty_odd"] = rep.fw_iterations_to_empty_odd;
  out["overall"] = pass ? "pass" : "fail";
  out["wall_ms"] = now_ms(t0);
  std::cout << out.dump(2) << "\n";
  write_file(g.out_dir, "verify_report.json", out.dump(2));
  return pass ? 0 : 1;
}

int run_fields(const GlobalOptions& g, const std::string& file, int samples,
               double threshold) {
  auto t0 = std::chrono::steady_clock::now();
  json out;
  out["command"] = "fields";
  out["file"] = file;
  out["samples"] = samples;
  out["threshold"] = {{"value", threshold}, {"provenance", "command line"}};

  std::string text;
  {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open field file: " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  MetricModel model = MetricModel::flat({});
  bool construction_ok = true;
  try {
    model = parse_field_json(text);
  } catch (const ConfigError& e) {
    construction_ok = false;
    out["construction_error"] = e.what();
    // Residual diagnostics through the unchecked path where possible.
    model = parse_field_json_unchecked(text);
  }

  auto pts = model.sample_points(samples);
  ResidualReport fe = check_field_equations(model, pts);
  ResidualReport ga = check_gauge(model, pts);
  out["family"] = model.family();
  out["field_equations"] = {{"max_abs", fe.max_abs}, {"max_rel", fe.max_rel}};
  out["gauge"] = {{"max_abs", ga.max_abs}, {"max_rel", ga.max_rel}};
  bool pass = construction_ok && fe.max_rel <= threshold &&
              ga.max_rel <= threshold;
  out["overall"] = pass ? "pass" : "fail";
  out["wall_ms"] = now_ms(t0);
  std::cout << out.dump(2) << "\n";
  write_file(g.out_dir, "fields_report.json", out.dump(2));
  return pass ? 0 : 1;
}

int run_simulate(const GlobalOptions& g, const std::string& file,
                 bool compare_classical) {
  auto t0 = std::chrono::steady_clock::now();
  Scenario sc = load_scenario_file(file);
  if (compare_classical) sc.compare_classical = true;

  json out;
  out["command"] = "simulate";
  out["file"] = file;
  out["mode"] = sc.mode == ScenarioMode::single ? "single" : "spin-contrast";

  if (sc.mode == ScenarioMode::single) {
    Evolver ev(sc.field, sc.grid, sc.mass);
    Trajectory traj = ev.run(ev.make_packet(sc.packet), sc.evolution);

    std::string csv;
    if (sc.compare_classical) {
      // Classical comparison track from the packet's mean initial data.
      Vec3 v0{sc.packet.momentum[0] / sc.mass, sc.packet.momentum[1] / sc.mass,
              sc.packet.momentum[2] / sc.mass};
      double duration = sc.evolution.dt * sc.evolution.steps;
      double cadence = sc.evolution.dt * sc.evolution.sample_every;
      ClassicalTrack track = classical_proper_time(sc.field, sc.packet.center,
                                                   v0, duration, cadence);
      csv = trajectory_csv(traj, &track);
    } else {
      csv = trajectory_csv(traj);
    }
    write_file(g.out_dir, sc.csv_name, csv);
    write_file(g.out_dir, sc.csv_name + ".meta.json",
               run_metadata_json(sc, traj));

    const auto& last = traj.samples.back();
    out["final"] = {{"t", last.t},
                    {"tau", last.tau},
                    {"tempo_re", last.tempo_re},
                    {"tempo_im", last.tempo_im},
                    {"norm", last.norm}};
    out["csv"] = sc.csv_name;
    out["overall"] = "pass";
  } else {
    SpinContrastReport rep = spin_contrast_experiment(sc.field, sc.grid,
                                                      sc.mass, sc.packet,
                                                      sc.evolution);
    std::string stem = sc.csv_name;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
      stem = stem.substr(0, stem.size() - 4);
    write_file(g.out_dir, stem + "_plus.csv", trajectory_csv(rep.plus));
    write_file(g.out_dir, stem + "_minus.csv", trajectory_csv(rep.minus));
    std::string contrast = "t,delta_tau,delta_tau_pred\n";
    for (std::size_t k = 0; k < rep.t.size(); ++k)
      contrast += fmt::format("{:.17g},{:.17g},{:.17g}\n", rep.t[k],
                              rep.delta_tau[k], rep.delta_tau_pred[k]);
    write_file(g.out_dir, stem + "_contrast.csv", contrast);
    write_file(g.out_dir, stem + ".meta.json", run_metadata_json(sc, rep.plus));

    double tol = sc.tolerance > 0 ? sc.tolerance : 0.05;
    bool pass = !rep.conclusive || rep.relative_error <= tol;
    out["delta_tau"] = rep.final_delta_tau;
    out["delta_tau_pred"] = rep.final_prediction;
    out["relative_error"] = rep.relative_error;
    out["noise_floor"] = rep.noise_floor;
    out["conclusive"] = rep.conclusive;
    out["tolerance"] = {{"value", tol}, {"provenance", sc.tolerance_provenance}};
    out["overall"] = rep.conclusive ? (pass ? "pass" : "fail") : "inconclusive";
    out["wall_ms"] = now_ms(t0);
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : 1;
  }
  out["wall_ms"] = now_ms(t0);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_export(const std::string& what) {
  const ReducedOperators& ops = reduced_operators();
  OperatorExpr e;
  if (what == "H")
    e = build_hamiltonian();
  else if (what == "H_FW")
    e = ops.h_fw;
  else if (what == "T")
    e = ops.tempo;
  else if (what == "T2")
    e = tempo_squared(tempo_operator(fw_reduce(build_hamiltonian(), 4)));
  else if (what == "xdot1" || what == "xdot2" || what == "xdot3")
    e = ops.velocity[what[4] - '1'];
  else if (what == "quadform") {
    FWResult fw = fw_reduce(build_hamiltonian(), 4);
    OperatorExpr h_fw = reduced_two_component(fw);
    std::array<OperatorExpr, 3> xdot;
    for (int i = 1; i <= 3; ++i) xdot[i - 1] = velocity_operator(h_fw, i);
    e = quadratic_form(xdot);
  } else {
    std::cerr << "unknown export target '" << what
              << "' (expected H, H_FW, T, T2, xdot1..3, quadform)\n";
    return 2;
  }
  std::cout << to_dsl(e) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proper-time operator toolkit: verification and simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  app.add_option("--config", g.config, "JSON file with defaults");
  app.add_option("--out-dir", g.out_dir, "directory for reports and CSV");
  app.add_flag("--deterministic", g.deterministic,
               "single-threaded, byte-stable outputs");
  app.add_option("--threads", g.threads, "worker threads for grid operators");

  auto* verify = app.add_subcommand("verify", "symbolic identity suite");
  std::string fixture_filter;
  bool no_rewrites = false;
  verify->add_option("--fixture", fixture_filter,
                     "run only checks whose name contains this");
  verify->add_flag("--no-rewrites", no_rewrites,
                   "disable the field-equation rewrite rules (negative control)");

  auto* fields = app.add_subcommand("fields", "field residual checks");
  std::string field_file;
  int samples = 100;
  double threshold = 1e-12;
  fields->add_option("--file", field_file, "field definition JSON")->required();
  fields->add_option("--samples", samples, "number of sample points");
  fields->add_option("--threshold", threshold, "relative residual threshold");

  auto* simulate = app.add_subcommand("simulate", "wavepacket scenario");
  std::string scenario_file;
  bool compare_classical = false;
  simulate->add_option("--file", scenario_file, "scenario JSON")->required();
  simulate->add_flag("--compare-classical", compare_classical,
                     "append the classical proper-time column");

  auto* exp = app.add_subcommand("export", "print a canonical operator");
  std::string what;
  exp->add_option("what", what, "H, H_FW, T, T2, xdot1..3, quadform")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_global(g);
    if (verify->parsed()) return run_verify(g, fixture_filter, no_rewrites);
    if (fields->parsed()) return run_fields(g, field_file, samples, threshold);
    if (simulate->parsed())
      return run_simulate(g, scenario_file, compare_classical);
    if (exp->parsed()) return run_export(what);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
