#pragma once

#include <optional>
#include <string>

#include "tempo/numeric_op.hpp"

namespace tempo {

struct EvolutionSpec {
  enum class Scheme { crank_nicolson, rk4 };
  Scheme scheme = Scheme::crank_nicolson;
  double dt = 0.01;
  int steps = 100;
  int sample_every = 1;
  double solver_tol = 1e-12;
  int max_solver_iters = 200;
  double norm_tol_per_step = 1e-8;
  double boundary_prob_tol = 1e-8;
  bool record_velocity = true;
};

struct TrajectorySample {
  double t = 0;
  double tau = 0;
  double tempo_re = 0;
  double tempo_im = 0;
  double norm = 1;
  Vec3 x{0, 0, 0};
  Vec3 v{0, 0, 0};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  SpinorGridState final_state;
  double mass = 1;
  std::string scheme;
  double solver_tol = 0;
  double stability_bound = 0;  // dt * ||W|| estimate actually used
};

/// tau(t) by trapezoid quadrature of Re<T> over the uniform samples
/// (O(dt^2) per step); returns the running series and records Im<T> as a
/// diagnostic column.
struct ProperTimeSeries {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<double> tempo_re;
  std::vector<double> tempo_im;
};
ProperTimeSeries proper_time(const Trajectory& traj);

/// Wavepacket evolution under the reduced Hamiltonian on a periodic grid.
///
/// The stepped operator is H_FW minus its rest-mass term (an exact global
/// phase). Default scheme is the implicit midpoint rule solved by a
/// kinetic-preconditioned fixed-point iteration in the curved inner product;
/// explicit RK4 is available for cross-validation. Field samples are
/// windowed to periodicity at the box edge.
class Evolver {
 public:
  /// Builds the symbolic pipeline (reduced Hamiltonian, tempo and velocity
  /// operators) and compiles it against the grid.
  Evolver(const MetricModel& model, const GridSpec& grid, double mass);

  /// Custom operators (used by the spin-contrast reference run): `evolved`
  /// is stepped as-is, `tempo` is sampled, velocities optional.
  Evolver(const MetricModel& model, const GridSpec& grid, double mass,
          const OperatorExpr& evolved, const OperatorExpr& tempo_expr,
          std::optional<std::array<OperatorExpr, 3>> velocities);

  Trajectory run(const SpinorGridState& initial, const EvolutionSpec& spec) const;

  SpinorGridState make_packet(const WavepacketSpec& w) const {
    return init_wavepacket(grid_, w, model_);
  }

  const OperatorExpr& evolved_operator() const { return evolved_; }
  const OperatorExpr& tempo_expression() const { return tempo_; }
  const MetricModel& model() const { return model_; }
  const GridSpec& grid() const { return grid_; }
  double mass() const { return mass_; }

 private:
  void step_crank_nicolson(SpinorGridState& s, const EvolutionSpec& spec) const;
  void step_rk4(SpinorGridState& s, const EvolutionSpec& spec) const;
  void precondition(std::vector<Complex>& a, double lambda) const;

  MetricModel model_;
  GridSpec grid_;
  double mass_;
  std::shared_ptr<const FourierWorkspace> fft_;
  OperatorExpr evolved_;  // stepped operator (rest mass removed)
  OperatorExpr tempo_;
  std::unique_ptr<GridOperator> op_full_;
  std::unique_ptr<GridOperator> op_w_;  // evolved minus flat kinetic
  std::unique_ptr<GridOperator> op_tempo_;
  std::array<std::unique_ptr<GridOperator>, 3> op_vel_;
};

/// Identity-matrix part of a two-component expression (spin-independent
/// terms) and its sigma complement.
OperatorExpr scalar_matrix_part(const OperatorExpr& e);
OperatorExpr sigma_matrix_part(const OperatorExpr& e);

/// The reduced two-component Hamiltonian, tempo operator and velocity
/// operators of the standard pipeline (computed once and cached).
struct ReducedOperators {
  OperatorExpr h_fw;           // full reduced Hamiltonian (with rest mass)
  OperatorExpr h_evolved;      // h_fw minus the rest-mass identity term
  OperatorExpr tempo;
  std::array<OperatorExpr, 3> velocity;
};
const ReducedOperators& reduced_operators();

}  // namespace tempo
