#include "tempo/classical.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace tempo {

namespace {

using State = std::array<double, 7>;  // x, v, tau

struct GeodesicSystem {
  const MetricModel& model;

  void operator()(const State& y, State& dydt, double) const {
    Vec3 x{y[0], y[1], y[2]};
    if (!model.admissible(x))
      throw std::domain_error(
          "classical trajectory left the admissible domain");
    FrameData f = frame_at(model, x);
    double u[4] = {1, y[3], y[4], y[5]};

    for (int i = 0; i < 3; ++i) dydt[i] = y[3 + i];
    for (int i = 0; i < 3; ++i) {
      double acc = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          acc -= (f.christoffel[i + 1][a][b] - y[3 + i] * f.christoffel[0][a][b]) *
                 u[a] * u[b];
      dydt[3 + i] = acc;
    }

    MetricPointData p;
    model.eval(x, p);
    double q = 1 + p.h[0][0];
    for (int i = 0; i < 3; ++i) q += 2 * p.h[0][i + 1] * u[i + 1];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        q += ((i == j ? -1.0 : 0.0) + p.h[i + 1][j + 1]) * u[i + 1] * u[j + 1];
    if (q < 0)
      throw std::domain_error("classical track turned spacelike");
    dydt[6] = std::sqrt(q);
  }
};

}  // namespace

ClassicalTrack classical_proper_time(const MetricModel& model, Vec3 x0, Vec3 v0,
                                     double duration, double sample_dt,
                                     double abs_tol, double rel_tol) {
  namespace ode = boost::numeric::odeint;
  State y{x0[0], x0[1], x0[2], v0[0], v0[1], v0[2], 0.0};

  ClassicalTrack track;
  auto observer = [&](const State& s, double t) {
    track.t.push_back(t);
    track.x.push_back({s[0], s[1], s[2]});
    track.v.push_back({s[3], s[4], s[5]});
    track.tau.push_back(s[6]);
  };

  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(
      abs_tol, rel_tol);
  ode::integrate_const(stepper, GeodesicSystem{model}, y, 0.0, duration,
                       sample_dt, observer);
  return track;
}

}  // namespace tempo
