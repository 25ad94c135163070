#pragma once

#include <vector>

#include "tempo/metric.hpp"

namespace tempo {

/// Point-particle track integrated from the linear-order geodesic equations
/// in coordinate time, with the proper time accumulated along it.
struct ClassicalTrack {
  std::vector<double> t;
  std::vector<Vec3> x;
  std::vector<Vec3> v;
  std::vector<double> tau;  // tau_cl(t), zero at the start
};

/// Integrates d^2x^i/dt^2 = -(Gamma^i_{ab} - v^i Gamma^0_{ab}) u^a u^b with
/// u = (1, v) using an adaptive Dormand-Prince 4(5) scheme, sampling every
/// `sample_dt`. dtau/dt = sqrt(g_{mu nu} u^mu u^nu). Throws if the
/// trajectory leaves the admissible domain.
ClassicalTrack classical_proper_time(const MetricModel& model, Vec3 x0, Vec3 v0,
                                     double duration, double sample_dt,
                                     double abs_tol = 1e-12,
                                     double rel_tol = 1e-12);

}  // namespace tempo
