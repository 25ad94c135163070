#include "tempo/metric.hpp"

#include <cmath>

#include "doctest.h"
#include "tempo/beta_invariance.hpp"
#include "tempo/dirac_assembly.hpp"
#include "tempo/fw.hpp"

using namespace tempo;

namespace {

MetricModel::Domain box(double half) {
  return {{-half, -half, -half}, {half, half, half}};
}

MetricModel shipped_point_mass() {
  return MetricModel::point_mass(1e-3, {0, 0, 0}, 0.5, box(10));
}

MetricModel shipped_dipole() {
  return MetricModel::gravitomagnetic_dipole(2e-3, {0, 0, 1}, {0, 0, 0}, 0.5,
                                             box(10));
}

}  // namespace

TEST_CASE("make_field families and validation") {
  // Uniform-gradient potential: phi = a x3 as the Newtonian pattern.
  Poly3 phi({{0, 0, 1, 1e-3}});
  MetricModel grad = MetricModel::newtonian_polynomial(phi, box(10));
  auto pts = grad.sample_points(50);
  CHECK(check_field_equations(grad, pts).max_abs == 0.0);
  CHECK(check_gauge(grad, pts).max_abs <= 1e-18);

  // Point mass: trace h = 2phi - 6phi = -4phi.
  MetricModel pm = shipped_point_mass();
  MetricPointData p;
  Vec3 x{2, 1, -1};
  pm.eval(x, p);
  double r = std::sqrt(6.0);
  double phival = -1e-3 / r;
  CHECK(pm.field_value({FieldBase::phi}, p) == doctest::Approx(phival).epsilon(1e-14));
  CHECK(pm.field_value({FieldBase::htr}, p) ==
        doctest::Approx(-4 * phival).epsilon(1e-14));

  // Invalid inputs are rejected.
  CHECK_THROWS_AS(MetricModel::point_mass(0.0, {0, 0, 0}, 0.5, box(10)),
                  std::invalid_argument);
  CHECK_THROWS_AS(MetricModel::point_mass(1e-3, {0, 0, 0}, 0.0, box(10)),
                  std::invalid_argument);
  // Non-harmonic polynomial: phi = x1^2.
  CHECK_THROWS_AS(
      MetricModel::newtonian_polynomial(Poly3({{2, 0, 0, 1e-3}}), box(10)),
      std::invalid_argument);
  // Weak-field cap violation.
  CHECK_THROWS_AS(MetricModel::point_mass(1.0, {0, 0, 0}, 0.5, box(10)),
                  std::invalid_argument);
  // Gauge violation: bare h00 without the spatial pattern.
  std::array<std::array<Poly3, 4>, 4> comps;
  comps[0][0] = Poly3({{0, 0, 1, 2e-3}});
  CHECK_THROWS_AS(MetricModel::harmonic_polynomial(comps, box(10)),
                  std::invalid_argument);
}

TEST_CASE("field equations and gauge residuals at 1e-12 relative") {
  for (const MetricModel& m : {shipped_point_mass(), shipped_dipole()}) {
    auto pts = m.sample_points(100);
    ResidualReport fe = check_field_equations(m, pts);
    ResidualReport ga = check_gauge(m, pts);
    CHECK(fe.samples == 100);
    CHECK(fe.max_rel <= 1e-12);
    CHECK(ga.max_rel <= 1e-12);
  }
  // Zero field: residuals vanish identically.
  MetricModel flat = MetricModel::flat(box(10));
  auto pts = flat.sample_points(10);
  CHECK(check_field_equations(flat, pts).max_abs == 0.0);
  CHECK(check_gauge(flat, pts).max_abs == 0.0);
}

TEST_CASE("negative control: non-harmonic field has residual 2") {
  // phi = x1^2 (constructed directly, bypassing validation) -> lap h00 = 4
  // with h00 = 2 phi; per component h_{ii} the residual is 4*phi'' = 4e-3...
  // keep the spec's scale: build h00 = 2 x1^2 * eps and check |lap h00| = 4 eps.
  // Validation rejects it, so evaluate the Laplacian directly from Poly3.
  Poly3 phi({{2, 0, 0, 1.0}});
  Poly3 h00 = phi.plus(phi);  // 2 phi = 2 x1^2
  CHECK(h00.laplacian().eval({0.3, -0.2, 0.9}) == doctest::Approx(4.0));
  CHECK(phi.laplacian().eval({0, 0, 0}) == doctest::Approx(2.0));
}

TEST_CASE("frame data") {
  // Zero field: identity vierbein, vanishing connection coefficients.
  MetricModel flat = MetricModel::flat(box(10));
  FrameData f = frame_at(flat, {1, 2, 3});
  for (int i = 0; i < 4; ++i)
    for (int mu = 0; mu < 4; ++mu)
      CHECK(f.vierbein[i][mu] == (i == mu ? 1.0 : 0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        CHECK(f.christoffel[a][b][c] == 0.0);
        CHECK(f.spin_connection[a][b][c] == 0.0);
      }
  CHECK(f.sqrt_minus_g == doctest::Approx(1.0));
  CHECK(f.sqrt_minus_3g == doctest::Approx(1.0));

  // Point mass at x = (r,0,0): v_0^0 = 1 - phi... with h00 = 2 phi the
  // layout gives 1 - h00/2 = 1 - phi and v_1^1 = 1 + h11/2 = 1 + phi.
  MetricModel pm = shipped_point_mass();
  Vec3 x{2, 0, 0};
  double phi = -1e-3 / 2.0;
  FrameData fp = frame_at(pm, x);
  CHECK(fp.vierbein[0][0] == doctest::Approx(1 - phi).epsilon(1e-14));
  CHECK(fp.vierbein[1][1] == doctest::Approx(1 + phi).epsilon(1e-14));

  // Vierbein condition v_i^mu v_j^nu g_{mu nu} = eta_{ij} + O(h^2).
  auto vierbein_residual = [](const MetricModel& m, const Vec3& pt) {
    MetricPointData p;
    m.eval(pt, p);
    FrameData f2 = frame_at(m, pt);
    double worst = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu) {
            double gmn = (mu == nu ? (mu == 0 ? 1.0 : -1.0) : 0.0) + p.h[mu][nu];
            s += f2.vierbein[i][mu] * f2.vierbein[j][nu] * gmn;
          }
        double eta = i == j ? (i == 0 ? 1.0 : -1.0) : 0.0;
        worst = std::max(worst, std::abs(s - eta));
      }
    return worst;
  };
  double cap = pm.weak_field_cap();
  for (const auto& pt : pm.sample_points(100))
    CHECK(vierbein_residual(pm, pt) <= 10 * cap * cap);

  // Spin connection antisymmetry in (i,j) to linear order.
  for (const auto& pt : pm.sample_points(20, 777)) {
    FrameData fr = frame_at(pm, pt);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int mu = 0; mu < 4; ++mu)
          CHECK(std::abs(fr.spin_connection[i][j][mu] +
                         fr.spin_connection[j][i][mu]) <= 10 * cap * cap);
  }

  // Probability-measure identity sqrt(-g) = (1+phi) sqrt(-3g) + O(h^2).
  for (const auto& pt : pm.sample_points(50, 99)) {
    MetricPointData p;
    pm.eval(pt, p);
    FrameData fr = frame_at(pm, pt);
    double lhs = fr.sqrt_minus_g;
    double rhs = (1 + p.h[0][0] / 2) * fr.sqrt_minus_3g;
    CHECK(std::abs(lhs - rhs) <= 10 * cap * cap);
  }

  // Inadmissible point.
  CHECK_THROWS_AS(frame_at(pm, {0.1, 0, 0}), std::domain_error);
}

TEST_CASE("superposition linearity of the vierbein") {
  MetricModel a = shipped_point_mass();
  MetricModel b = shipped_dipole();
  MetricModel ab = MetricModel::superpose({a, b});
  for (const auto& pt : ab.sample_points(20)) {
    FrameData fa = frame_at(a, pt);
    FrameData fb = frame_at(b, pt);
    FrameData fab = frame_at(ab, pt);
    for (int i = 0; i < 4; ++i)
      for (int mu = 0; mu < 4; ++mu) {
        double expect = fa.vierbein[i][mu] + fb.vierbein[i][mu] -
                        (i == mu ? 1.0 : 0.0);
        CHECK(fab.vierbein[i][mu] == doctest::Approx(expect).epsilon(1e-13));
      }
  }
}

TEST_CASE("assembled Dirac Hamiltonian matches the printed form to O(h^2)") {
  OperatorExpr H = build_hamiltonian();
  const double mass = 1.0;

  // Zero field: exactly m beta + alpha.p.
  MetricModel flat = MetricModel::flat(box(10));
  DiracCoefficientTable direct = assemble_dirac_hamiltonian(flat, {1, 1, 1}, mass);
  DiracCoefficientTable printed = evaluate_first_order(H, flat, {1, 1, 1}, mass);
  CHECK(max_coefficient_difference(direct, printed) <= 1e-14);

  MetricModel pm = shipped_point_mass();
  double cap = pm.weak_field_cap();
  for (const auto& pt : pm.sample_points(20)) {
    DiracCoefficientTable d2 = assemble_dirac_hamiltonian(pm, pt, mass);
    DiracCoefficientTable p2 = evaluate_first_order(H, pm, pt, mass);
    CHECK(max_coefficient_difference(d2, p2) <= 10 * cap * cap);
  }

  MetricModel gm = shipped_dipole();
  for (const auto& pt : gm.sample_points(20)) {
    DiracCoefficientTable d2 = assemble_dirac_hamiltonian(gm, pt, mass);
    DiracCoefficientTable p2 = evaluate_first_order(H, gm, pt, mass);
    CHECK(max_coefficient_difference(d2, p2) <= 10 * cap * cap);
  }
}

TEST_CASE("invariance solution spaces") {
  // Rotations only: commutant is 4-dimensional.
  InvarianceSpace rot = invariance_space(default_group_sample(false, true, false));
  CHECK(rot.dimension == 4);

  // Boosts + rotations: two dimensions (beta and the beta gamma5 direction).
  InvarianceSpace br = invariance_space(default_group_sample(true, true, false));
  CHECK(br.dimension == 2);

  // Adding parity pins the line spanned by beta.
  InvarianceSpace full = invariance_space(default_group_sample(true, true, true));
  CHECK(full.dimension == 1);
  CHECK(full.spanned_by_beta());
  CHECK(full.beta_residual <= 1e-10);
}
