#include "tempo/evolve.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "tempo/dsl.hpp"
#include "tempo/fw.hpp"

namespace tempo {

const ReducedOperators& reduced_operators() {
  static const ReducedOperators ops = [] {
    // The numeric layer evaluates the constraint-reduced canonical forms:
    // every shipped field satisfies the vacuum and gauge conditions exactly,
    // so the reduction does not change the operator's action, and it leaves
    // field derivatives within the analytic second-order data.
    ReducedOperators r;
    FWResult fw = fw_reduce(build_hamiltonian(), 4);
    r.h_fw = apply_rewrites(reduced_two_component(fw));
    // Remove the rest-mass identity term m*1: an exact global phase.
    std::vector<OperatorTerm> kept;
    for (const auto& t : r.h_fw.terms()) {
      bool rest_mass = t.mpow == 1 && t.fields.empty() &&
                       t.matrix == DiracAlgebra::kIdentity &&
                       is_empty(t.derivs) && is_empty(t.coords);
      if (!rest_mass) kept.push_back(t);
    }
    r.h_evolved = OperatorExpr::from_terms(std::move(kept));
    r.tempo = apply_rewrites(tempo_operator(fw));
    for (int i = 1; i <= 3; ++i)
      r.velocity[i - 1] = apply_rewrites(velocity_operator(r.h_fw, i));
    return r;
  }();
  return ops;
}

OperatorExpr scalar_matrix_part(const OperatorExpr& e) {
  std::vector<OperatorTerm> kept;
  for (const auto& t : e.terms())
    if (t.matrix == DiracAlgebra::kIdentity) kept.push_back(t);
  return OperatorExpr::from_terms(std::move(kept));
}

OperatorExpr sigma_matrix_part(const OperatorExpr& e) {
  std::vector<OperatorTerm> kept;
  for (const auto& t : e.terms())
    if (t.matrix != DiracAlgebra::kIdentity) kept.push_back(t);
  return OperatorExpr::from_terms(std::move(kept));
}

namespace {

/// Flat kinetic part -(1/2m) lap, split off for preconditioning.
OperatorExpr flat_kinetic() {
  return parse_operator("-(1/(2*m))*(d1^2 + d2^2 + d3^2)");
}

}  // namespace

Evolver::Evolver(const MetricModel& model, const GridSpec& grid, double mass)
    : Evolver(model, grid, mass, reduced_operators().h_evolved,
              reduced_operators().tempo, reduced_operators().velocity) {}

Evolver::Evolver(const MetricModel& model, const GridSpec& grid, double mass,
                 const OperatorExpr& evolved, const OperatorExpr& tempo_expr,
                 std::optional<std::array<OperatorExpr, 3>> velocities)
    : model_(model),
      grid_(grid),
      mass_(mass),
      fft_(std::make_shared<FourierWorkspace>(grid)),
      evolved_(evolved),
      tempo_(tempo_expr) {
  // Every grid point must be admissible: singular-field exclusion balls and
  // the model's working domain have to lie outside the box.
  for (int i = 0; i < grid_.n[0]; ++i)
    for (int j = 0; j < grid_.n[1]; ++j)
      for (int k = 0; k < grid_.n[2]; ++k) {
        Vec3 x{grid_.coord(0, i), grid_.coord(1, j), grid_.coord(2, k)};
        if (!model_.admissible(x))
          throw std::invalid_argument(
              "grid box contains inadmissible points of the field model");
      }
  op_full_ = std::make_unique<GridOperator>(evolved_, model_, grid_, mass_, fft_);
  op_w_ = std::make_unique<GridOperator>(evolved_ - flat_kinetic(), model_,
                                         grid_, mass_, fft_);
  op_tempo_ =
      std::make_unique<GridOperator>(tempo_, model_, grid_, mass_, fft_);
  if (velocities)
    for (int i = 0; i < 3; ++i)
      op_vel_[i] = std::make_unique<GridOperator>((*velocities)[i], model_,
                                                  grid_, mass_, fft_);
}

void Evolver::precondition(std::vector<Complex>& a, double lambda) const {
  fft_->forward(a);
  std::size_t idx = 0;
  for (int i = 0; i < grid_.n[0]; ++i)
    for (int j = 0; j < grid_.n[1]; ++j)
      for (int k = 0; k < grid_.n[2]; ++k, ++idx) {
        double k2 = 0;
        int ijk[3] = {i, j, k};
        for (int a2 = 0; a2 < grid_.dim; ++a2) {
          double kv = fft_->wavenumber(a2, ijk[a2]);
          k2 += kv * kv;
        }
        a[idx] /= Complex(1, lambda * k2 / (2 * mass_));
      }
  fft_->backward(a);
}

void Evolver::step_crank_nicolson(SpinorGridState& s,
                                  const EvolutionSpec& spec) const {
  const double lambda = spec.dt / 2;
  const Complex minus_il(0, -lambda);
  const std::size_t n = grid_.size();

  // rhs = (1 - i lambda H) s.
  SpinorGridState hs = SpinorGridState::zeros(grid_);
  op_full_->apply(s, hs);
  SpinorGridState rhs = s;
  for (std::size_t p = 0; p < n; ++p) {
    rhs.up[p] += minus_il * hs.up[p];
    rhs.dn[p] += minus_il * hs.dn[p];
  }

  // Solve (1 + i lambda (K + W)) x = rhs by the preconditioned fixed point
  // x <- (1 + i lambda K)^{-1} (rhs - i lambda W x).
  SpinorGridState x = rhs;
  SpinorGridState wx = SpinorGridState::zeros(grid_);
  double ref = 0;
  for (std::size_t p = 0; p < n; ++p)
    ref += std::norm(rhs.up[p]) + std::norm(rhs.dn[p]);
  ref = std::sqrt(ref);

  for (int it = 0;; ++it) {
    if (it >= spec.max_solver_iters)
      throw std::runtime_error(
          "implicit midpoint solver failed to converge; reduce dt (bound: "
          "dt*||W|| = " +
          std::to_string(spec.dt * op_w_->symbol_bound()) + ")");
    op_w_->apply(x, wx);
    SpinorGridState y = rhs;
    for (std::size_t p = 0; p < n; ++p) {
      y.up[p] += minus_il * wx.up[p];
      y.dn[p] += minus_il * wx.dn[p];
    }
    precondition(y.up, lambda);
    precondition(y.dn, lambda);
    double delta = 0;
    for (std::size_t p = 0; p < n; ++p) {
      delta += std::norm(y.up[p] - x.up[p]) + std::norm(y.dn[p] - x.dn[p]);
    }
    delta = std::sqrt(delta) / (ref > 0 ? ref : 1);
    x = std::move(y);
    if (delta < spec.solver_tol) break;
  }
  x.time = s.time + spec.dt;
  s = std::move(x);
}

void Evolver::step_rk4(SpinorGridState& s, const EvolutionSpec& spec) const {
  const std::size_t n = grid_.size();
  const Complex mi(0, -1);
  auto rhs = [&](const SpinorGridState& in, SpinorGridState& out) {
    op_full_->apply(in, out);
    for (std::size_t p = 0; p < n; ++p) {
      out.up[p] *= mi;
      out.dn[p] *= mi;
    }
  };
  SpinorGridState k1 = SpinorGridState::zeros(grid_), k2 = k1, k3 = k1, k4 = k1,
                  tmp = s;
  rhs(s, k1);
  for (std::size_t p = 0; p < n; ++p) {
    tmp.up[p] = s.up[p] + 0.5 * spec.dt * k1.up[p];
    tmp.dn[p] = s.dn[p] + 0.5 * spec.dt * k1.dn[p];
  }
  rhs(tmp, k2);
  for (std::size_t p = 0; p < n; ++p) {
    tmp.up[p] = s.up[p] + 0.5 * spec.dt * k2.up[p];
    tmp.dn[p] = s.dn[p] + 0.5 * spec.dt * k2.dn[p];
  }
  rhs(tmp, k3);
  for (std::size_t p = 0; p < n; ++p) {
    tmp.up[p] = s.up[p] + spec.dt * k3.up[p];
    tmp.dn[p] = s.dn[p] + spec.dt * k3.dn[p];
  }
  rhs(tmp, k4);
  for (std::size_t p = 0; p < n; ++p) {
    s.up[p] += spec.dt / 6.0 *
               (k1.up[p] + 2.0 * k2.up[p] + 2.0 * k3.up[p] + k4.up[p]);
    s.dn[p] += spec.dt / 6.0 *
               (k1.dn[p] + 2.0 * k2.dn[p] + 2.0 * k3.dn[p] + k4.dn[p]);
  }
  s.time += spec.dt;
}

Trajectory Evolver::run(const SpinorGridState& initial,
                        const EvolutionSpec& spec) const {
  if (!(initial.grid == grid_))
    throw std::invalid_argument("Evolver: state grid mismatch");

  // Documented stability bounds: the fixed-point solver needs
  // (dt/2) ||W|| < 1; RK4 needs dt (k_max^2/2m + ||W||) inside its imaginary
  // stability interval (|z| <= 2.8).
  double wb = op_w_->symbol_bound();
  double kin = 0;
  for (int a = 0; a < grid_.dim; ++a) {
    double kmax = std::numbers::pi / grid_.spacing(a);
    kin += kmax * kmax / (2 * mass_);
  }
  if (spec.scheme == EvolutionSpec::Scheme::crank_nicolson) {
    if (spec.dt / 2 * wb >= 0.9)
      throw std::invalid_argument(
          "time step violates the solver bound (dt/2)*||W|| < 0.9: got " +
          std::to_string(spec.dt / 2 * wb));
  } else {
    if (spec.dt * (kin + wb) > 2.8)
      throw std::invalid_argument(
          "time step violates the RK4 stability bound dt*rho(H) <= 2.8: got " +
          std::to_string(spec.dt * (kin + wb)));
  }

  Trajectory traj;
  traj.mass = mass_;
  traj.scheme = spec.scheme == EvolutionSpec::Scheme::crank_nicolson
                    ? "crank-nicolson"
                    : "rk4";
  traj.solver_tol = spec.solver_tol;
  traj.stability_bound = spec.dt * wb;

  SpinorGridState s = initial;
  double prev_norm = std::sqrt(op_full_->norm_squared(s));
  double tau = 0;
  double prev_tempo = 0;
  bool have_prev = false;
  double sample_dt = spec.dt * spec.sample_every;

  auto record = [&](const SpinorGridState& st) {
    TrajectorySample smp;
    smp.t = st.time;
    smp.norm = std::sqrt(op_full_->norm_squared(st));
    Complex te = op_tempo_->expectation(st);
    // tau integrates Re<T>; Im<T> is a self-adjointness diagnostic.
    smp.tempo_re = te.real();
    smp.tempo_im = te.imag();
    if (have_prev) tau += sample_dt / 2 * (prev_tempo + smp.tempo_re);
    prev_tempo = smp.tempo_re;
    have_prev = true;
    smp.tau = tau;
    for (int a = 1; a <= grid_.dim; ++a)
      smp.x[a - 1] = coordinate_expectation(st, model_, a);
    for (int a = grid_.dim; a < 3; ++a) smp.x[a] = grid_.center[a];
    if (spec.record_velocity && op_vel_[0])
      for (int a = 0; a < 3; ++a)
        smp.v[a] = op_vel_[a]->expectation(st).real();
    double bp = boundary_probability(st, 2);
    if (bp > spec.boundary_prob_tol)
      throw std::runtime_error(
          "wavepacket support reached the grid boundary (probability " +
          std::to_string(bp) + " within 2 cells at t = " +
          std::to_string(st.time) + ")");
    traj.samples.push_back(smp);
  };

  record(s);
  for (int step = 1; step <= spec.steps; ++step) {
    if (spec.scheme == EvolutionSpec::Scheme::crank_nicolson)
      step_crank_nicolson(s, spec);
    else
      step_rk4(s, spec);

    double norm = std::sqrt(op_full_->norm_squared(s));
    if (std::abs(norm - prev_norm) > spec.norm_tol_per_step)
      throw std::runtime_error(fmt::format(
          "norm drift {:.3e} exceeded the per-step tolerance {:.3e} at t = {}",
          std::abs(norm - prev_norm), spec.norm_tol_per_step, s.time));
    prev_norm = norm;
    if (step % spec.sample_every == 0) record(s);
  }
  traj.final_state = std::move(s);
  return traj;
}

ProperTimeSeries proper_time(const Trajectory& traj) {
  ProperTimeSeries out;
  double tau = 0;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    if (k > 0) {
      double dt = s.t - traj.samples[k - 1].t;
      tau += dt / 2 * (traj.samples[k - 1].tempo_re + s.tempo_re);
    }
    out.t.push_back(s.t);
    out.tau.push_back(tau);
    out.tempo_re.push_back(s.tempo_re);
    out.tempo_im.push_back(s.tempo_im);
  }
  return out;
}

}  // namespace tempo
