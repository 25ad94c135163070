#include "tempo/beta_invariance.hpp"

#include <cmath>

#include "tempo/dirac.hpp"

namespace tempo {

namespace {

Eigen::Matrix4cd to_eigen(std::uint8_t basis_index) {
  auto m = DiracAlgebra::instance().matrix(basis_index);
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = m[r][c];
  return out;
}

Eigen::Matrix4cd alpha_dot(const std::array<double, 3>& n) {
  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
  for (int j = 0; j < 3; ++j)
    a += n[j] * to_eigen(DiracAlgebra::alpha(j + 1));
  return a;
}

Eigen::Matrix4cd sigma_dot(const std::array<double, 3>& n) {
  const auto& alg = DiracAlgebra::instance();
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  static const std::complex<double> ph[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int k = 1; k <= 3; ++k) {
    auto sc = alg.sigma(k);
    s += n[k - 1] * ph[sc.iphase] * to_eigen(sc.index);
  }
  return s;
}

std::array<double, 3> normalized(std::array<double, 3> v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (n == 0) return {0, 0, 1};
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace

Eigen::Matrix4cd spinor_representation(const LorentzSample& s) {
  using Kind = LorentzSample::Kind;
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  std::array<double, 3> n = normalized(s.axis);
  switch (s.kind) {
    case Kind::boost:
      // exp(zeta/2 alpha.n) = cosh(zeta/2) + sinh(zeta/2) alpha.n
      return std::cosh(s.parameter / 2) * id +
             std::sinh(s.parameter / 2) * alpha_dot(n);
    case Kind::rotation: {
      // exp(-i theta/2 Sigma.n) = cos(theta/2) - i sin(theta/2) Sigma.n
      std::complex<double> mi(0, -1);
      return std::cos(s.parameter / 2) * id +
             mi * std::sin(s.parameter / 2) * sigma_dot(n);
    }
    case Kind::parity:
      return to_eigen(DiracAlgebra::kBeta);
  }
  return id;
}

InvarianceSpace invariance_space(const std::vector<LorentzSample>& sample,
                                 double sv_threshold) {
  // Stack the linear maps D -> S^dagger D S - D over all sampled elements;
  // vec is column-major, so vec(A D B) = (B^T kron A) vec(D).
  Eigen::MatrixXcd M(16 * sample.size(), 16);
  for (std::size_t s = 0; s < sample.size(); ++s) {
    Eigen::Matrix4cd S = spinor_representation(sample[s]);
    Eigen::Matrix4cd A = S.adjoint();
    Eigen::Matrix4cd Bt = S.transpose();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        M.block<4, 4>(16 * s + 4 * j, 4 * i) = Bt(j, i) * A;
    M.block<16, 16>(16 * s, 0) -= Eigen::MatrixXcd::Identity(16, 16);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double scale = sv.size() ? sv(0) : 1.0;
  if (scale == 0) scale = 1.0;

  InvarianceSpace out;
  out.dimension = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) <= sv_threshold * scale) out.dimension += 1;

  for (int k = 16 - out.dimension; k < 16; ++k) {
    Eigen::VectorXcd v = svd.matrixV().col(k);
    Eigen::Matrix4cd D;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) D(j, i) = v(4 * i + j);
    out.basis.push_back(D);
  }

  if (out.dimension == 1) {
    Eigen::Matrix4cd beta = to_eigen(DiracAlgebra::kBeta);
    const Eigen::Matrix4cd& D = out.basis[0];
    std::complex<double> c = (beta.adjoint() * D).trace() / 4.0;
    out.beta_residual = (D - c * beta).norm() / D.norm();
  }
  return out;
}

std::vector<LorentzSample> default_group_sample(bool boosts, bool rotations,
                                                bool parity) {
  using Kind = LorentzSample::Kind;
  std::vector<LorentzSample> s;
  if (boosts) {
    s.push_back({Kind::boost, {1, 0, 0}, 0.6});
    s.push_back({Kind::boost, {0, 1, 0}, 0.45});
    s.push_back({Kind::boost, {0, 0, 1}, 0.8});
  }
  if (rotations) {
    s.push_back({Kind::rotation, {1, 0, 0}, 0.9});
    s.push_back({Kind::rotation, {0, 1, 0}, 0.7});
    s.push_back({Kind::rotation, {0, 0, 1}, 1.1});
  }
  if (parity) s.push_back({Kind::parity, {0, 0, 1}, 0});
  return s;
}

}  // namespace tempo
