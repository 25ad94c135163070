#include "tempo/scenario.hpp"

#include "doctest.h"

using namespace tempo;

namespace {

const char* kPointMassField = R"({
  "family": "point-mass",
  "mu": 1e-3,
  "center": [0, 0, 0],
  "r_min": 1.0,
  "weak_field_cap": 0.05,
  "domain": {"lo": [-40, -40, -40], "hi": [40, 40, 40]}
})";

const char* kScenario = R"({
  "mass": 1.0,
  "field": {
    "family": "point-mass",
    "mu": 1e-3,
    "center": [0, 0, 0],
    "r_min": 1.0,
    "domain": {"lo": [-40, -40, -40], "hi": [40, 40, 40]}
  },
  "grid": {"dim": 1, "n": [128], "length": [26], "center": [15, 0, 0]},
  "packet": {"center": [15, 0, 0], "width": [1.5, 1, 1], "momentum": [0, 0, 0]},
  "evolution": {"scheme": "crank-nicolson", "dt": 0.05, "steps": 40,
                "sample_every": 10},
  "tolerance": 1e-5,
  "output": {"csv": "redshift.csv"}
})";

}  // namespace

TEST_CASE("field json round trip and validation errors") {
  MetricModel m = parse_field_json(kPointMassField);
  CHECK(m.family() == "point-mass");
  CHECK(m.exclusion_radius() == 1.0);

  CHECK_THROWS_AS(parse_field_json("{"), ConfigError);
  CHECK_THROWS_AS(parse_field_json(R"({"family": "warp-drive"})"), ConfigError);
  CHECK_THROWS_AS(parse_field_json(R"({"family": "point-mass"})"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_field_json(
          R"({"family": "point-mass", "mu": "big", "center": [0,0,0],
              "r_min": 1, "domain": {"lo": [-1,-1,-1], "hi": [1,1,1]}})"),
      doctest::Contains("'mu' must be a number"), ConfigError);

  // Superposition of two families parses and re-checks the cap.
  std::string super = std::string(R"({"family": "superposition", "parts": [)") +
                      kPointMassField + "," + R"({
    "family": "gravitomagnetic-dipole", "kappa": 2e-3, "spin": [0,0,1],
    "center": [0,0,0], "r_min": 1.0,
    "domain": {"lo": [-40,-40,-40], "hi": [40,40,40]}}]})";
  CHECK(parse_field_json(super).family() == "superposition");
}

TEST_CASE("scenario json and csv output") {
  Scenario sc = parse_scenario_json(kScenario);
  CHECK(sc.mass == 1.0);
  CHECK(sc.grid.dim == 1);
  CHECK(sc.grid.n[0] == 128);
  CHECK(sc.evolution.steps == 40);
  CHECK(sc.tolerance == 1e-5);
  CHECK(sc.tolerance_provenance == "scenario");
  CHECK(sc.csv_name == "redshift.csv");

  Evolver ev(sc.field, sc.grid, sc.mass);
  Trajectory traj = ev.run(ev.make_packet(sc.packet), sc.evolution);
  std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("t,tau,tempo_re,tempo_im,norm,x1,x2,x3,v1,v2,v3\n", 0) == 0);
  // One header plus one row per sample.
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        long(traj.samples.size()) + 1);

  // Determinism: the identical run yields byte-identical CSV.
  Trajectory traj2 = ev.run(ev.make_packet(sc.packet), sc.evolution);
  CHECK(trajectory_csv(traj2) == csv);

  std::string meta = run_metadata_json(sc, traj);
  CHECK(meta.find("\"scheme\": \"crank-nicolson\"") != std::string::npos);
  CHECK(meta.find("\"tolerance_provenance\": \"scenario\"") != std::string::npos);

  // Scenario validation errors.
  CHECK_THROWS_AS(parse_scenario_json(R"({"mass": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"mass": 1})"), ConfigError);
}
