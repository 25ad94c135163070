// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status is zero only when all pass.

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "tempo/beta_invariance.hpp"
#include "tempo/classical.hpp"
#include "tempo/dsl.hpp"
#include "tempo/experiment.hpp"
#include "tempo/fw.hpp"
#include "tempo/scenario.hpp"

using namespace tempo;

#ifndef TEMPO_DATA_DIR
#define TEMPO_DATA_DIR "data"
#endif

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  fmt::print("[{:>2}] {}  {}  ({})\n", index, pass ? "PASS" : "FAIL", name,
             detail);
  if (!pass) ++g_failures;
}

std::string data_path(const std::string& rel) {
  return std::string(TEMPO_DATA_DIR) + "/" + rel;
}

OperatorExpr P(const std::string& s) { return parse_operator(s); }

OperatorExpr reduce(const OperatorExpr& e) { return apply_rewrites(e); }

double max_ehrenfest_error(const Trajectory& traj, int dims) {
  double worst = 0;
  const auto& s = traj.samples;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    double dt2 = s[k + 1].t - s[k - 1].t;
    for (int a = 0; a < dims; ++a) {
      double dxdt = (s[k + 1].x[a] - s[k - 1].x[a]) / dt2;
      worst = std::max(worst, std::abs(dxdt - s[k].v[a]));
    }
  }
  return worst;
}

}  // namespace

int main() {
  // --- Symbolic criteria -------------------------------------------------
  OperatorExpr H = build_hamiltonian();
  FWResult fw = fw_reduce(H, 4);

  {  // 1. FW fixture match (term-for-term, exact rational arithmetic).
    OperatorExpr diff_full =
        reduce(fw.even_hamiltonian -
               even_part(P(fixtures::transformed_hamiltonian())));
    OperatorExpr diff_red =
        reduce(reduced_two_component(fw) -
               upper_block(even_part(P(fixtures::reduced_hamiltonian()))));
    bool ok = diff_full.is_zero() && diff_red.is_zero() &&
              fw.residual_odd.is_zero();
    report(1, "FW reduction reproduces the printed Hamiltonian", ok,
           ok ? "normal-form difference empty after 4 steps"
              : "difference: " + to_dsl(diff_full) + " | " + to_dsl(diff_red));
  }

  {  // 2. Transformed-beta fixture (even part).
    OperatorExpr even =
        even_part(transform_observable(fw, P("(1+phi)*beta")));
    OperatorExpr diff = reduce(even - P(fixtures::transformed_beta_even()));
    report(2, "transformed (1+phi) beta matches its printed even part",
           diff.is_zero(),
           diff.is_zero() ? "exact zero" : "difference: " + to_dsl(diff));
  }

  OperatorExpr T = tempo_operator(fw);
  {  // 3. Tempo fixtures: T and T^2.
    OperatorExpr dT = reduce(T - P(fixtures::tempo()));
    OperatorExpr dT2 = reduce(tempo_squared(T) - P(fixtures::tempo_squared()));
    bool ok = dT.is_zero() && dT2.is_zero();
    report(3, "tempo operator and its square match the printed displays", ok,
           ok ? "exact zero" : to_dsl(dT) + " | " + to_dsl(dT2));
  }

  OperatorExpr h_fw = reduced_two_component(fw);
  std::array<OperatorExpr, 3> xdot;
  {  // 4. Velocity fixtures for every axis.
    bool ok = true;
    std::string detail = "exact zero for i = 1, 2, 3";
    for (int i = 1; i <= 3; ++i) {
      xdot[i - 1] = velocity_operator(h_fw, i);
      OperatorExpr d = reduce(xdot[i - 1] - P(fixtures::velocity(i)));
      if (!d.is_zero()) {
        ok = false;
        detail = "axis " + std::to_string(i) + ": " + to_dsl(d);
      }
    }
    report(4, "velocity operators match the printed commutators", ok, detail);
  }

  {  // 5. Central identity plus its negative control.
    OperatorExpr q = quadratic_form(xdot);
    OperatorExpr diff = reduce(q - tempo_squared(T));
    bool identity = diff.is_zero();

    OperatorExpr q_raw = quadratic_form(xdot, RewriteRuleSet::none());
    OperatorExpr t2_raw = tempo_squared(T, RewriteRuleSet::none());
    OperatorExpr residue = q_raw - t2_raw;
    bool control = !residue.is_zero();
    bool laplacian_pattern = false;
    for (const auto& t : residue.terms())
      for (const auto& f : t.fields)
        if (f.deriv_order() >= 2) laplacian_pattern = true;
    bool ok = identity && control && laplacian_pattern;
    report(5, "central identity: quadratic form equals tempo squared", ok,
           ok ? "exact zero; control residue keeps second-derivative fields"
              : identity ? "negative control failed" : to_dsl(diff));
  }

  {  // 6. Momentum commutator fixture.
    OperatorExpr diff = commutator(P("p1"), P("p2")) -
                        P(fixtures::momentum_commutator_12());
    report(6, "[p1, p2] equals the printed commutation relation",
           diff.is_zero(),
           diff.is_zero() ? "exact zero, no rewrites needed" : to_dsl(diff));
  }

  {  // 7. beta uniqueness from the sampled invariance condition.
    InvarianceSpace rot = invariance_space(default_group_sample(false, true, false));
    InvarianceSpace br = invariance_space(default_group_sample(true, true, false));
    InvarianceSpace full = invariance_space(default_group_sample(true, true, true));
    bool ok = rot.dimension > 1 && br.dimension == 2 && full.dimension == 1 &&
              full.spanned_by_beta();
    report(7, "invariance solution space is the beta line", ok,
           fmt::format("dims: rotations {}, +boosts {}, +parity {} "
                       "(beta residual {:.1e})",
                       rot.dimension, br.dimension, full.dimension,
                       full.beta_residual));
  }

  {  // 8. Shipped field library residuals at 1e-12 relative.
    bool ok = true;
    std::string detail;
    for (const char* f : {"fields/point_mass.json",
                          "fields/gravitomagnetic_dipole.json",
                          "fields/uniform_gradient.json"}) {
      MetricModel m = load_field_file(data_path(f));
      auto pts = m.sample_points(100);
      ResidualReport fe = check_field_equations(m, pts);
      ResidualReport ga = check_gauge(m, pts);
      ok = ok && fe.max_rel <= 1e-12 && ga.max_rel <= 1e-12;
      detail += fmt::format("{}: lap {:.1e}, gauge {:.1e}; ", m.family(),
                            fe.max_rel, ga.max_rel);
    }
    report(8, "field library satisfies the vacuum and gauge conditions", ok,
           detail + "100 random admissible points each");
  }

  // --- Numeric criteria ---------------------------------------------------

  {  // 9. Flat-space dilation over >= 10 packet-crossing times.
    Scenario sc = load_scenario_file(data_path("scenarios/flat_dilation.json"));
    Evolver ev(sc.field, sc.grid, sc.mass);
    Trajectory traj = ev.run(ev.make_packet(sc.packet), sc.evolution);
    const auto& last = traj.samples.back();
    double v = sc.packet.momentum[0] / sc.mass;
    double width_corr = 0;
    for (int a = 0; a < sc.grid.dim; ++a)
      width_corr += 1.0 / (4 * sc.packet.width[a] * sc.packet.width[a]);
    width_corr /= 2 * sc.mass * sc.mass;
    double measured = last.tau / last.t + width_corr;
    double expect = 1 - v * v / 2;
    double rel = std::abs(measured - expect) / expect;
    double crossings = last.t * v / sc.packet.width[0];
    bool ok = rel <= sc.tolerance && crossings >= 10;
    report(9, "flat-space dilation rate", ok,
           fmt::format("tau/t + width corr = {:.12f} vs {:.12f} "
                       "(rel {:.1e} <= {:.0e}; {:.0f} crossing times)",
                       measured, expect, rel, sc.tolerance, crossings));
  }

  {  // 10. Gravitational redshift against the quadrature oracle.
    Scenario sc = load_scenario_file(data_path("scenarios/redshift.json"));
    Evolver ev(sc.field, sc.grid, sc.mass);
    Trajectory traj = ev.run(ev.make_packet(sc.packet), sc.evolution);
    const auto& last = traj.samples.back();
    double measured = last.tau / last.t;

    oracle::Packet op;
    op.center = sc.packet.center;
    op.width = sc.packet.width;
    op.momentum = sc.packet.momentum;
    op.dim = sc.grid.dim;
    double predicted =
        oracle::expectation(ev.tempo_expression(), sc.field, op, sc.mass,
                            6000, 6.5)
            .real();
    double rel = std::abs(measured - predicted) / std::abs(predicted);
    bool ok = rel <= sc.tolerance;
    // The headline number: dtau/dt ~ 1 + <phi> (plus the width correction
    // the oracle carries).
    MetricPointData mp;
    sc.field.eval(sc.packet.center, mp);
    report(10, "gravitational redshift of the proper-time rate", ok,
           fmt::format("dtau/dt = {:.10f}, oracle {:.10f}, 1+phi = {:.10f} "
                       "(rel {:.1e} <= {:.0e})",
                       measured, predicted, 1 + mp.h[0][0] / 2, rel,
                       sc.tolerance));
  }

  {  // 11. Ehrenfest tie between the layers, with dt-halving convergence.
    Scenario sc = load_scenario_file(data_path("scenarios/ehrenfest_2d.json"));
    Evolver ev(sc.field, sc.grid, sc.mass);
    SpinorGridState s0 = ev.make_packet(sc.packet);

    Trajectory coarse = ev.run(s0, sc.evolution);
    EvolutionSpec fine = sc.evolution;
    fine.dt /= 2;
    fine.steps *= 2;  // same duration and sample cadence in step count
    Trajectory fined = ev.run(s0, fine);

    double e1 = max_ehrenfest_error(coarse, sc.grid.dim);
    double e2 = max_ehrenfest_error(fined, sc.grid.dim);
    double ratio = e2 > 0 ? e1 / e2 : 0;
    bool ok = e1 <= sc.tolerance && ratio >= 2.5 && ratio <= 7.0;
    report(11, "Ehrenfest: d<x>/dt equals the symbolic velocity", ok,
           fmt::format("max |d<x>/dt - <xdot>| = {:.2e} <= {:.0e}; "
                       "halving dt gives ratio {:.2f}",
                       e1, sc.tolerance, ratio));
  }

  {  // 12. Spin contrast against the perturbative prediction.
    Scenario sc = load_scenario_file(data_path("scenarios/spin_contrast.json"));
    SpinContrastReport rep = spin_contrast_experiment(sc.field, sc.grid,
                                                      sc.mass, sc.packet,
                                                      sc.evolution);
    bool ok = rep.conclusive && rep.relative_error <= sc.tolerance &&
              std::abs(rep.final_delta_tau) > rep.noise_floor;
    report(12, "spin contrast matches the sigma-term prediction", ok,
           fmt::format("delta tau = {:.4e}, predicted {:.4e} "
                       "(rel {:.2f}% <= {:.0f}%; noise floor {:.1e})",
                       rep.final_delta_tau, rep.final_prediction,
                       100 * rep.relative_error, 100 * sc.tolerance,
                       rep.noise_floor));
  }

  {  // 13. Three-dimensional smoke scenario (supplementary).
    Scenario sc = load_scenario_file(data_path("scenarios/smoke_3d.json"));
    Evolver ev(sc.field, sc.grid, sc.mass);
    Trajectory traj = ev.run(ev.make_packet(sc.packet), sc.evolution);
    const auto& last = traj.samples.back();
    bool ok = std::abs(last.norm - 1) < 1e-8 && last.tau > 0;
    report(13, "3d smoke run (supplementary)", ok,
           fmt::format("norm {:.10f}, tau {:.6f} at t = {}", last.norm,
                       last.tau, last.t));
  }

  if (g_failures == 0) {
    fmt::print("ACCEPTANCE: all criteria passed\n");
    return 0;
  }
  fmt::print("ACCEPTANCE: {} criterion(s) failed\n", g_failures);
  return 1;
}
