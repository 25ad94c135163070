#include "tempo/dirac_assembly.hpp"

#include <cmath>

#include "tempo/dirac.hpp"

namespace tempo {

namespace {

Eigen::Matrix4cd basis_matrix(std::uint8_t index) {
  auto m = DiracAlgebra::instance().matrix(index);
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = m[r][c];
  return out;
}

}  // namespace

DiracCoefficientTable assemble_dirac_hamiltonian(const MetricModel& model,
                                                 const Vec3& x, double mass) {
  FrameData f = frame_at(model, x);

  // gamma^0 = beta, gamma^j = beta alpha_j.
  Eigen::Matrix4cd gamma[4];
  gamma[0] = basis_matrix(DiracAlgebra::kBeta);
  for (int j = 1; j <= 3; ++j)
    gamma[j] = gamma[0] * basis_matrix(DiracAlgebra::alpha(j));

  // Lorentz generators S^{kl} = (1/4)[gamma^k, gamma^l].
  Eigen::Matrix4cd S[4][4];
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      S[k][l] = 0.25 * (gamma[k] * gamma[l] - gamma[l] * gamma[k]);

  // A^mu = gamma^j v_j^mu; B = i gamma^j v_j^mu (1/2) omega_{kl,mu} S^{kl} - m.
  Eigen::Matrix4cd A[4];
  for (int mu = 0; mu < 4; ++mu) {
    A[mu] = Eigen::Matrix4cd::Zero();
    for (int j = 0; j < 4; ++j) A[mu] += f.vierbein[j][mu] * gamma[j];
  }
  const std::complex<double> iu(0, 1);
  Eigen::Matrix4cd B = -mass * Eigen::Matrix4cd::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    Eigen::Matrix4cd conn = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        conn += 0.5 * f.spin_connection[k][l][mu] * S[k][l];
    B += iu * A[mu] * conn;
  }

  // (i A^0 d_t + i A^k d_k + B) psi = 0  =>  i d_t psi = -(A^0)^{-1}(i A^k d_k + B).
  Eigen::Matrix4cd A0inv = A[0].inverse();
  DiracCoefficientTable out;
  for (int k = 0; k < 3; ++k) out.deriv[k] = -iu * (A0inv * A[k + 1]);
  out.zero = -(A0inv * B);
  return out;
}

DiracCoefficientTable evaluate_first_order(const OperatorExpr& H,
                                           const MetricModel& model,
                                           const Vec3& x, double mass) {
  MetricPointData p;
  model.eval(x, p);

  DiracCoefficientTable out;
  for (int k = 0; k < 3; ++k) out.deriv[k].setZero();
  out.zero.setZero();

  for (const auto& t : H.terms()) {
    if (!is_empty(t.coords))
      throw std::domain_error("evaluate_first_order: coordinate factor");
    if (order(t.derivs) > 1)
      throw std::domain_error("evaluate_first_order: derivative order > 1");
    std::complex<double> c(t.coeff.re.to_double(), t.coeff.im.to_double());
    c *= std::pow(mass, t.mpow);
    for (const auto& fs : t.fields) c *= model.field_value(fs, p);
    Eigen::Matrix4cd mat = c * basis_matrix(t.matrix);
    if (order(t.derivs) == 0) {
      out.zero += mat;
    } else {
      for (int k = 0; k < 3; ++k)
        if (t.derivs[k]) out.deriv[k] += mat;
    }
  }
  return out;
}

double max_coefficient_difference(const DiracCoefficientTable& a,
                                  const DiracCoefficientTable& b) {
  double m = (a.zero - b.zero).cwiseAbs().maxCoeff();
  for (int k = 0; k < 3; ++k)
    m = std::max(m, (a.deriv[k] - b.deriv[k]).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace tempo
