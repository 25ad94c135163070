#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tempo/dirac.hpp"
#include "tempo/rational.hpp"

namespace tempo {

/// Multi-index of spatial partial derivatives (counts per axis 1..3).
using MultiIndex = std::array<std::uint8_t, 3>;

inline int order(const MultiIndex& m) { return m[0] + m[1] + m[2]; }
inline bool is_empty(const MultiIndex& m) { return order(m) == 0; }

/// Scalar field functions of the linearized metric. Every base carries
/// h-degree one; `htr` is the trace eta^{mu nu} h_{mu nu}.
enum class FieldBase : std::uint8_t {
  phi,
  g1,
  g2,
  g3,
  h11,
  h12,
  h13,
  h22,
  h23,
  h33,
  htr,
};

const char* field_base_name(FieldBase b);

/// h_{ij} component with symmetric canonicalization (h21 -> h12).
FieldBase h_component(int i, int j);

/// A derivative monomial applied to a field base. The multi-index is the
/// count of partials per axis, so equality of symbols is structural.
struct FieldSymbol {
  FieldBase base;
  MultiIndex deriv{0, 0, 0};

  int deriv_order() const { return order(deriv); }
  friend auto operator<=>(const FieldSymbol&, const FieldSymbol&) = default;
};

/// Grading window of the algebra: powers of m kept and the maximal degree in
/// the metric perturbation. A construction-time parameter so tests can widen
/// it; the default matches the working order 1/m^2 at linear order in h.
struct Truncation {
  int min_mpow = -2;
  int max_mpow = 1;
  int max_hdeg = 1;
  int max_field_deriv = 3;
};

inline const Truncation& default_truncation() {
  static const Truncation t{};
  return t;
}

/// One normal-ordered term:
///   coeff * m^mpow * x^coords * (product of field symbols) * matrix * d^derivs
/// Multiplication operators stand left of the derivative monomial; field
/// factors commute and are kept sorted.
struct OperatorTerm {
  GaussianRational coeff;
  int mpow = 0;
  std::vector<FieldSymbol> fields;
  std::uint8_t matrix = DiracAlgebra::kIdentity;
  MultiIndex derivs{0, 0, 0};
  MultiIndex coords{0, 0, 0};

  int h_degree() const { return int(fields.size()); }

  /// Ordering key ignoring the coefficient; canonical expressions keep terms
  /// sorted by this key with unique keys.
  std::strong_ordering key_compare(const OperatorTerm& o) const;
  bool key_equal(const OperatorTerm& o) const {
    return key_compare(o) == std::strong_ordering::equal;
  }
};

/// Canonical finite sum of OperatorTerm. Two expressions are equal at the
/// working truncation iff their term lists are identical.
class OperatorExpr {
 public:
  OperatorExpr() = default;

  static OperatorExpr zero() { return {}; }
  static OperatorExpr one() { return scalar(GaussianRational(1)); }
  static OperatorExpr scalar(GaussianRational c);
  static OperatorExpr imaginary_unit() { return scalar(GaussianRational::unit_i()); }
  static OperatorExpr m_power(int k);
  static OperatorExpr field(FieldSymbol f);
  static OperatorExpr matrix_element(std::uint8_t basis_index);
  static OperatorExpr derivative(int axis);
  static OperatorExpr coordinate(int axis);
  /// Sigma_k = diag(sigma_k, sigma_k).
  static OperatorExpr sigma(int k);
  static OperatorExpr alpha(int j) { return matrix_element(DiracAlgebra::alpha(j)); }
  static OperatorExpr beta() { return matrix_element(DiracAlgebra::kBeta); }

  static OperatorExpr from_terms(std::vector<OperatorTerm> terms,
                                 const Truncation& tr = default_truncation());

  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool contains_coordinates() const;
  int max_field_deriv_order() const;
  int max_deriv_order() const;

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b);

 private:
  friend OperatorExpr canonicalize(std::vector<OperatorTerm>, const Truncation&);
  friend OperatorExpr scale(const OperatorExpr&, const GaussianRational&);
  void give_terms(std::vector<OperatorTerm> ts) { terms_ = std::move(ts); }
  std::vector<OperatorTerm> terms_;
};

/// Re-canonicalizes (and re-truncates) an expression; the identity map on
/// expressions already canonical at the same window.
OperatorExpr normal_form(const OperatorExpr& e,
                         const Truncation& tr = default_truncation());

OperatorExpr add(const OperatorExpr& a, const OperatorExpr& b,
                 const Truncation& tr = default_truncation());
OperatorExpr scale(const OperatorExpr& a, const GaussianRational& c);
OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b,
                      const Truncation& tr = default_truncation());

inline OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  return add(a, b);
}
inline OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) {
  return add(a, scale(b, GaussianRational(-1)));
}
inline OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  return multiply(a, b);
}
inline OperatorExpr operator*(const GaussianRational& c, const OperatorExpr& a) {
  return scale(a, c);
}
inline OperatorExpr operator-(const OperatorExpr& a) {
  return scale(a, GaussianRational(-1));
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b,
                        const Truncation& tr = default_truncation());

/// [e, x^i] computed from [d^a, x^i] = a_i d^(a - e_i); fields, coordinates
/// and matrices commute with x^i.
OperatorExpr commutator_with_coordinate(const OperatorExpr& e, int axis,
                                        const Truncation& tr = default_truncation());

enum class Measure { flat, sqrt_minus_g, sqrt_minus_3g };

/// Formal adjoint under the measure-weighted inner product, expanded to
/// linear order in h.
OperatorExpr adjoint(const OperatorExpr& e, Measure mu,
                     const Truncation& tr = default_truncation());

/// e^{iS} X e^{-iS} as a terminating nested-commutator series. Requires every
/// term of S to carry mpow <= -1 so the series leaves the window.
OperatorExpr exp_conjugate(const OperatorExpr& S, const OperatorExpr& X,
                           const Truncation& tr = default_truncation());

/// Even/odd split with respect to beta: even = (X + beta X beta)/2.
OperatorExpr even_part(const OperatorExpr& e,
                       const Truncation& tr = default_truncation());
OperatorExpr odd_part(const OperatorExpr& e,
                      const Truncation& tr = default_truncation());

/// Two-component restriction of an even expression (upper-left block);
/// beta acts as the identity there. Throws on odd matrix content.
OperatorExpr upper_block(const OperatorExpr& e,
                         const Truncation& tr = default_truncation());

/// True when every matrix factor lies in {1, Sigma_k}, i.e. the expression
/// acts on two-component wave functions.
bool is_two_component(const OperatorExpr& e);

/// Thrown by exp_conjugate when the generator is not small in the 1/m grading.
struct GradingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tempo
