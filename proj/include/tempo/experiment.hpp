#pragma once

#include "tempo/evolve.hpp"

namespace tempo {

/// Two full runs differing only in the spin direction, plus an independent
/// first-order prediction from the sigma terms of the tempo operator
/// evaluated along a spin-blind reference evolution.
struct SpinContrastReport {
  std::vector<double> t;
  std::vector<double> delta_tau;       // tau_plus - tau_minus
  std::vector<double> delta_tau_pred;  // 2 * integral of Re<T_sigma>_ref
  double final_delta_tau = 0;
  double final_prediction = 0;
  double relative_error = 0;  // |measured - predicted| / |predicted|
  double noise_floor = 0;
  bool conclusive = false;
  Trajectory plus, minus;
};

SpinContrastReport spin_contrast_experiment(const MetricModel& model,
                                            const GridSpec& grid, double mass,
                                            const WavepacketSpec& packet,
                                            const EvolutionSpec& evolution);

}  // namespace tempo
