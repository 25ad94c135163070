#pragma once

#include <string>

#include "tempo/classical.hpp"
#include "tempo/evolve.hpp"
#include "tempo/experiment.hpp"

namespace tempo {

/// Thrown on malformed field or scenario documents; the message names the
/// offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Field-definition document (JSON): family tag, parameters, domain box,
/// exclusion radius and weak-field cap. See data/fields/*.json for examples.
MetricModel load_field_file(const std::string& path);
MetricModel parse_field_json(const std::string& text);
/// Polynomial families only: skips construction validation so a rejected
/// file can still be evaluated for a residual failure report.
MetricModel parse_field_json_unchecked(const std::string& text);

enum class ScenarioMode { single, spin_contrast };

struct Scenario {
  double mass = 1;
  MetricModel field = MetricModel::flat({});
  GridSpec grid;
  WavepacketSpec packet;
  EvolutionSpec evolution;
  ScenarioMode mode = ScenarioMode::single;
  bool compare_classical = false;
  std::string csv_name = "trajectory.csv";
  // Scenario-pinned acceptance tolerances, echoed into reports.
  double tolerance = 0;
  std::string tolerance_provenance = "default";
};

Scenario load_scenario_file(const std::string& path);
/// `base_dir` anchors relative field-file references.
Scenario parse_scenario_json(const std::string& text,
                             const std::string& base_dir = "");

/// CSV columns: t, tau, tempo_re, tempo_im, norm, x1, x2, x3, v1, v2, v3
/// (plus tau_cl with a classical comparison track resampled at the same
/// times). Full double precision, deterministic formatting.
std::string trajectory_csv(const Trajectory& traj,
                           const ClassicalTrack* classical = nullptr);

/// Run-metadata document: every parameter, scheme, tolerances, version.
std::string run_metadata_json(const Scenario& sc, const Trajectory& traj);

}  // namespace tempo
