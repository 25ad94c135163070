#include "tempo/scenario.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace tempo {

namespace {

using nlohmann::json;

json must_get(const json& j, const std::string& key, const char* ctx) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(ctx) + ": missing required key '" + key + "'");
  return j.at(key);
}

double num(const json& j, const std::string& key, const char* ctx) {
  json v = must_get(j, key, ctx);
  if (!v.is_number())
    throw ConfigError(std::string(ctx) + ": '" + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

Vec3 vec3(const json& j, const std::string& key, const char* ctx) {
  json v = must_get(j, key, ctx);
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(std::string(ctx) + ": '" + key +
                      "' must be an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Vec3 vec3_or(const json& j, const std::string& key, Vec3 fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return vec3(j, key, "config");
}

Poly3 poly(const json& v, const char* ctx) {
  if (!v.is_array())
    throw ConfigError(std::string(ctx) +
                      ": polynomial must be an array of [a,b,c,coef] rows");
  std::vector<Poly3::Mono> monos;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != 4)
      throw ConfigError(std::string(ctx) +
                        ": polynomial row must be [a,b,c,coef]");
    monos.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(),
                     row[3].get<double>()});
  }
  return Poly3(std::move(monos));
}

MetricModel::Domain domain_of(const json& j, const char* ctx) {
  json d = must_get(j, "domain", ctx);
  MetricModel::Domain dom;
  dom.lo = vec3(d, "lo", ctx);
  dom.hi = vec3(d, "hi", ctx);
  for (int a = 0; a < 3; ++a)
    if (dom.lo[a] >= dom.hi[a])
      throw ConfigError(std::string(ctx) + ": domain lo must be below hi");
  return dom;
}

MetricModel field_from_json(const json& j, bool checked = true) {
  const char* ctx = "field";
  std::string family =
      must_get(j, "family", ctx).is_string()
          ? j.at("family").get<std::string>()
          : throw ConfigError("field: 'family' must be a string");
  double cap = num_or(j, "weak_field_cap", 0.05);

  if (family == "flat") return MetricModel::flat(domain_of(j, ctx));
  if (family == "point-mass") {
    return MetricModel::point_mass(num(j, "mu", ctx), vec3(j, "center", ctx),
                                   num(j, "r_min", ctx), domain_of(j, ctx), cap);
  }
  if (family == "gravitomagnetic-dipole") {
    return MetricModel::gravitomagnetic_dipole(
        num(j, "kappa", ctx), vec3(j, "spin", ctx), vec3(j, "center", ctx),
        num(j, "r_min", ctx), domain_of(j, ctx), cap);
  }
  if (family == "newtonian-polynomial") {
    Poly3 phi = poly(must_get(j, "phi", ctx), ctx);
    if (!checked) {
      std::array<std::array<Poly3, 4>, 4> h;
      for (int diag = 0; diag < 4; ++diag) h[diag][diag] = phi.plus(phi);
      return MetricModel::harmonic_polynomial_unchecked(std::move(h),
                                                        domain_of(j, ctx), cap);
    }
    return MetricModel::newtonian_polynomial(std::move(phi), domain_of(j, ctx),
                                             cap);
  }
  if (family == "harmonic-polynomial") {
    json comps = must_get(j, "components", ctx);
    std::array<std::array<Poly3, 4>, 4> h;
    static const char* names[4][4] = {
        {"h00", "h01", "h02", "h03"},
        {"h01", "h11", "h12", "h13"},
        {"h02", "h12", "h22", "h23"},
        {"h03", "h13", "h23", "h33"}};
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        if (comps.contains(names[m][n]))
          h[m][n] = poly(comps.at(names[m][n]), ctx);
    if (!checked)
      return MetricModel::harmonic_polynomial_unchecked(std::move(h),
                                                        domain_of(j, ctx), cap);
    return MetricModel::harmonic_polynomial(std::move(h), domain_of(j, ctx), cap);
  }
  if (family == "superposition") {
    json parts = must_get(j, "parts", ctx);
    if (!parts.is_array() || parts.empty())
      throw ConfigError("field: 'parts' must be a non-empty array");
    std::vector<MetricModel> models;
    for (const auto& p : parts) models.push_back(field_from_json(p));
    return MetricModel::superpose(std::move(models));
  }
  throw ConfigError("field: unknown family '" + family + "'");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ConfigError(std::string(what) + ": not valid JSON");
  return j;
}

}  // namespace

MetricModel parse_field_json(const std::string& text) {
  try {
    return field_from_json(parse_json(text, "field file"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field file: ") + e.what());
  }
}

MetricModel parse_field_json_unchecked(const std::string& text) {
  try {
    return field_from_json(parse_json(text, "field file"), false);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field file: ") + e.what());
  }
}

MetricModel load_field_file(const std::string& path) {
  return parse_field_json(slurp(path));
}

Scenario parse_scenario_json(const std::string& text,
                             const std::string& base_dir) {
  json j = parse_json(text, "scenario file");
  const char* ctx = "scenario";
  Scenario sc;
  sc.mass = num(j, "mass", ctx);
  if (sc.mass <= 0) throw ConfigError("scenario: mass must be positive");

  json f = must_get(j, "field", ctx);
  if (f.is_object() && f.contains("file")) {
    // Relative field references resolve against the scenario's directory.
    std::filesystem::path p = f.at("file").get<std::string>();
    if (p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    sc.field = load_field_file(p.string());
  } else {
    sc.field = parse_field_json(f.dump());
  }

  json g = must_get(j, "grid", ctx);
  sc.grid.dim = int(num(g, "dim", "grid"));
  if (sc.grid.dim < 1 || sc.grid.dim > 3)
    throw ConfigError("grid: dim must be 1, 2 or 3");
  json n = must_get(g, "n", "grid");
  json len = must_get(g, "length", "grid");
  if (!n.is_array() || int(n.size()) != sc.grid.dim)
    throw ConfigError("grid: 'n' must list one size per dimension");
  if (!len.is_array() || int(len.size()) != sc.grid.dim)
    throw ConfigError("grid: 'length' must list one extent per dimension");
  for (int a = 0; a < sc.grid.dim; ++a) {
    sc.grid.n[a] = n[a].get<int>();
    sc.grid.length[a] = len[a].get<double>();
    if (sc.grid.n[a] < 4) throw ConfigError("grid: sizes must be at least 4");
    if (sc.grid.length[a] <= 0) throw ConfigError("grid: lengths must be positive");
  }
  sc.grid.center = vec3_or(g, "center", {0, 0, 0});

  json p = must_get(j, "packet", ctx);
  sc.packet.center = vec3(p, "center", "packet");
  sc.packet.width = vec3(p, "width", "packet");
  sc.packet.momentum = vec3(p, "momentum", "packet");
  sc.packet.spin_theta = num_or(p, "spin_theta", 0.0);
  sc.packet.spin_phi = num_or(p, "spin_phi", 0.0);

  json e = must_get(j, "evolution", ctx);
  std::string scheme = e.contains("scheme")
                           ? e.at("scheme").get<std::string>()
                           : "crank-nicolson";
  if (scheme == "crank-nicolson")
    sc.evolution.scheme = EvolutionSpec::Scheme::crank_nicolson;
  else if (scheme == "rk4")
    sc.evolution.scheme = EvolutionSpec::Scheme::rk4;
  else
    throw ConfigError("evolution: unknown scheme '" + scheme + "'");
  sc.evolution.dt = num(e, "dt", "evolution");
  sc.evolution.steps = int(num(e, "steps", "evolution"));
  sc.evolution.sample_every = int(num_or(e, "sample_every", 1));
  sc.evolution.solver_tol = num_or(e, "solver_tol", 1e-12);
  sc.evolution.max_solver_iters = int(num_or(e, "max_solver_iters", 200));
  sc.evolution.norm_tol_per_step = num_or(e, "norm_tol_per_step", 1e-8);
  sc.evolution.boundary_prob_tol = num_or(e, "boundary_prob_tol", 1e-8);
  if (sc.evolution.dt <= 0 || sc.evolution.steps <= 0 ||
      sc.evolution.sample_every <= 0)
    throw ConfigError("evolution: dt, steps, sample_every must be positive");

  std::string mode = j.contains("mode") ? j.at("mode").get<std::string>()
                                        : "single";
  if (mode == "single")
    sc.mode = ScenarioMode::single;
  else if (mode == "spin-contrast")
    sc.mode = ScenarioMode::spin_contrast;
  else
    throw ConfigError("scenario: unknown mode '" + mode + "'");

  sc.compare_classical =
      j.contains("compare_classical") && j.at("compare_classical").get<bool>();
  if (j.contains("output")) {
    json o = j.at("output");
    if (o.contains("csv")) sc.csv_name = o.at("csv").get<std::string>();
  }
  sc.tolerance = num_or(j, "tolerance", 0.0);
  if (j.contains("tolerance")) sc.tolerance_provenance = "scenario";
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  return parse_scenario_json(slurp(path),
                             std::filesystem::path(path).parent_path().string());
}

std::string trajectory_csv(const Trajectory& traj,
                           const ClassicalTrack* classical) {
  std::string out = "t,tau,tempo_re,tempo_im,norm,x1,x2,x3,v1,v2,v3";
  if (classical) out += ",tau_cl";
  out += "\n";
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    out += fmt::format(
        "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
        "{:.17g},{:.17g},{:.17g}",
        s.t, s.tau, s.tempo_re, s.tempo_im, s.norm, s.x[0], s.x[1], s.x[2],
        s.v[0], s.v[1], s.v[2]);
    if (classical) {
      double tau_cl = k < classical->tau.size() ? classical->tau[k] : 0.0;
      out += fmt::format(",{:.17g}", tau_cl);
    }
    out += "\n";
  }
  return out;
}

std::string run_metadata_json(const Scenario& sc, const Trajectory& traj) {
  json meta;
  meta["version"] = "0.1.0";
  meta["mass"] = sc.mass;
  meta["field_family"] = sc.field.family();
  meta["weak_field_cap"] = sc.field.weak_field_cap();
  meta["grid"] = {{"dim", sc.grid.dim},
                  {"n", {sc.grid.n[0], sc.grid.n[1], sc.grid.n[2]}},
                  {"length",
                   {sc.grid.length[0], sc.grid.length[1], sc.grid.length[2]}},
                  {"center",
                   {sc.grid.center[0], sc.grid.center[1], sc.grid.center[2]}}};
  meta["packet"] = {
      {"center", {sc.packet.center[0], sc.packet.center[1], sc.packet.center[2]}},
      {"width", {sc.packet.width[0], sc.packet.width[1], sc.packet.width[2]}},
      {"momentum",
       {sc.packet.momentum[0], sc.packet.momentum[1], sc.packet.momentum[2]}},
      {"spin_theta", sc.packet.spin_theta},
      {"spin_phi", sc.packet.spin_phi}};
  meta["evolution"] = {{"scheme", traj.scheme},
                       {"dt", sc.evolution.dt},
                       {"steps", sc.evolution.steps},
                       {"sample_every", sc.evolution.sample_every},
                       {"solver_tol", sc.evolution.solver_tol},
                       {"norm_tol_per_step", sc.evolution.norm_tol_per_step},
                       {"boundary_prob_tol", sc.evolution.boundary_prob_tol},
                       {"stability_bound_dt_normW", traj.stability_bound}};
  meta["rest_mass_phase_removed"] = true;
  meta["tolerance"] = sc.tolerance;
  meta["tolerance_provenance"] = sc.tolerance_provenance;
  return meta.dump(2);
}

}  // namespace tempo
