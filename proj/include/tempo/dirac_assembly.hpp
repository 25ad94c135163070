#pragma once

#include <Eigen/Dense>

#include "tempo/algebra.hpp"
#include "tempo/metric.hpp"

namespace tempo {

/// Matrix coefficients of a first-order Hamiltonian
///   i dt psi = (sum_k deriv[k] d_k + zero) psi
/// at one point.
struct DiracCoefficientTable {
  Eigen::Matrix4cd deriv[3];
  Eigen::Matrix4cd zero;
};

/// Builds i gamma^j v_j^mu D_mu - m from the frame data at x and solves for
/// the Hamiltonian form. The covariant derivative carries the spin
/// connection; the time-derivative coefficient is inverted exactly.
DiracCoefficientTable assemble_dirac_hamiltonian(const MetricModel& model,
                                                 const Vec3& x, double mass);

/// Evaluates a canonical first-order operator expression (the printed H) to
/// the same coefficient layout at x. Throws if the expression carries
/// derivative monomials beyond first order or coordinate factors.
DiracCoefficientTable evaluate_first_order(const OperatorExpr& H,
                                           const MetricModel& model,
                                           const Vec3& x, double mass);

double max_coefficient_difference(const DiracCoefficientTable& a,
                                  const DiracCoefficientTable& b);

}  // namespace tempo
