#pragma once

#include <array>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tempo/algebra.hpp"

namespace tempo {

using Vec3 = std::array<double, 3>;

/// Metric perturbation and its analytic derivatives at one point:
/// h_{mu nu}, d_k h_{mu nu}, d_k d_l h_{mu nu} (spatial derivatives only;
/// all fields are static).
struct MetricPointData {
  double h[4][4]{};
  double dh[4][4][3]{};
  double d2h[4][4][3][3]{};
};

/// Trivariate polynomial with closed-form derivatives; used by the
/// harmonic-polynomial family.
class Poly3 {
 public:
  struct Mono {
    int a = 0, b = 0, c = 0;
    double coef = 0;
  };

  Poly3() = default;
  explicit Poly3(std::vector<Mono> monos);

  bool empty() const { return monos_.empty(); }
  int degree() const;
  double eval(const Vec3& x) const;
  Poly3 derivative(int axis) const;
  Poly3 laplacian() const;
  Poly3 plus(const Poly3& o, double scale = 1.0) const;
  bool is_zero(double tol = 1e-12) const;
  const std::vector<Mono>& monomials() const { return monos_; }

 private:
  std::vector<Mono> monos_;
};

class MetricFamily;

/// A static weak-field metric model over a rectangular working domain.
/// Construction validates the family parameters and the weak-field cap.
class MetricModel {
 public:
  struct Domain {
    Vec3 lo{-1, -1, -1};
    Vec3 hi{1, 1, 1};
  };

  static MetricModel flat(Domain d);
  /// User-supplied components; each must be harmonic and satisfy the gauge
  /// conditions (validated exactly on the polynomial coefficients).
  static MetricModel harmonic_polynomial(std::array<std::array<Poly3, 4>, 4> h,
                                         Domain d, double weak_cap = 0.05);
  /// Same family with construction validation skipped; exists so the fields
  /// command can attach residual numbers to its rejection report.
  static MetricModel harmonic_polynomial_unchecked(
      std::array<std::array<Poly3, 4>, 4> h, Domain d, double weak_cap = 0.05);
  /// h00 = 2 phi, h_ij = 2 phi delta_ij for a harmonic polynomial phi.
  static MetricModel newtonian_polynomial(Poly3 phi, Domain d,
                                          double weak_cap = 0.05);
  static MetricModel point_mass(double mu, Vec3 center, double r_min, Domain d,
                                double weak_cap = 0.05);
  /// g = kappa (S x r)/|r|^3, i.e. h_{0j} = -g_j.
  static MetricModel gravitomagnetic_dipole(double kappa, Vec3 spin,
                                            Vec3 center, double r_min, Domain d,
                                            double weak_cap = 0.05);
  static MetricModel superpose(std::vector<MetricModel> parts);

  void eval(const Vec3& x, MetricPointData& out) const;
  bool admissible(const Vec3& x) const;
  const Domain& domain() const { return domain_; }
  double exclusion_radius() const { return r_min_; }
  double weak_field_cap() const { return weak_cap_; }
  const std::string& family() const { return family_; }

  /// Deterministic admissible sample points (for residual checks).
  std::vector<Vec3> sample_points(int count, unsigned seed = 12345) const;

  /// Values of a FieldSymbol (phi, g_i, h_ij, trace h and derivatives up to
  /// second order) computed from the metric data.
  double field_value(const FieldSymbol& f, const MetricPointData& p) const;

 private:
  MetricModel() = default;
  void enforce_weak_cap() const;

  std::shared_ptr<const MetricFamily> impl_;
  Domain domain_{};
  double r_min_ = 0;
  double weak_cap_ = 0.05;
  std::string family_;
  std::vector<Vec3> centers_;  // exclusion centers (superposition-aware)
  friend class MetricFamily;
};

/// Frame data at a point: the vierbein of the fixed layout, linear-order
/// Christoffel symbols, spin connection, and the exact metric volume factors.
struct FrameData {
  double vierbein[4][4]{};       // v_i^mu, row local index, column coordinate
  double christoffel[4][4][4]{}; // Gamma^lambda_{nu mu}, linear order
  double spin_connection[4][4][4]{};  // omega_{ij,mu}
  double sqrt_minus_g = 1;
  double sqrt_minus_3g = 1;
};

FrameData frame_at(const MetricModel& model, const Vec3& x);

struct ResidualReport {
  double max_abs = 0;  // largest constraint residual
  double max_rel = 0;  // residual relative to the derivative scale at the point
  int samples = 0;
};

/// Vacuum field equation residual: max |lap h_{mu nu}| over samples.
ResidualReport check_field_equations(const MetricModel& model,
                                     const std::vector<Vec3>& samples);

/// Coordinate-condition residuals: |sum_j d_j h_{0j}| and
/// |sum_j d_j h_{ij} + (1/2) d_i h|.
ResidualReport check_gauge(const MetricModel& model,
                           const std::vector<Vec3>& samples);

}  // namespace tempo
