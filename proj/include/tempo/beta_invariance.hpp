#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace tempo {

/// One sampled symmetry element acting on spinors.
struct LorentzSample {
  enum class Kind { boost, rotation, parity };
  Kind kind = Kind::parity;
  std::array<double, 3> axis{0, 0, 1};  // normalized internally
  double parameter = 0;                 // rapidity or angle
};

/// Spinor representation matrix: boosts exp(zeta/2 alpha.n), rotations
/// exp(-i theta/2 Sigma.n), parity beta.
Eigen::Matrix4cd spinor_representation(const LorentzSample& s);

/// Solution space of S(L)^dagger D S(L) = D over all sampled elements,
/// computed as an SVD nullspace over the 16 complex matrix unknowns.
struct InvarianceSpace {
  int dimension = -1;                    // complex dimension at threshold
  std::vector<Eigen::Matrix4cd> basis;   // orthonormal basis of solutions
  double beta_residual = 1.0;  // Frobenius distance of basis[0] to span{beta},
                               // meaningful when dimension == 1
  bool spanned_by_beta() const { return dimension == 1 && beta_residual < 1e-8; }
};

InvarianceSpace invariance_space(const std::vector<LorentzSample>& sample,
                                 double sv_threshold = 1e-10);

/// 3 boosts + 3 rotations (+ parity when requested); the spec's minimum
/// group sample.
std::vector<LorentzSample> default_group_sample(bool boosts, bool rotations,
                                                bool parity);

}  // namespace tempo
