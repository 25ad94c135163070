#include "tempo/algebra.hpp"

#include <tuple>

namespace tempo {

const char* field_base_name(FieldBase b) {
  switch (b) {
    case FieldBase::phi: return "phi";
    case FieldBase::g1: return "g1";
    case FieldBase::g2: return "g2";
    case FieldBase::g3: return "g3";
    case FieldBase::h11: return "h11";
    case FieldBase::h12: return "h12";
    case FieldBase::h13: return "h13";
    case FieldBase::h22: return "h22";
    case FieldBase::h23: return "h23";
    case FieldBase::h33: return "h33";
    case FieldBase::htr: return "h";
  }
  return "?";
}

FieldBase h_component(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) throw std::out_of_range("h index");
  if (i > j) std::swap(i, j);
  switch (i * 10 + j) {
    case 11: return FieldBase::h11;
    case 12: return FieldBase::h12;
    case 13: return FieldBase::h13;
    case 22: return FieldBase::h22;
    case 23: return FieldBase::h23;
    default: return FieldBase::h33;
  }
}

std::strong_ordering OperatorTerm::key_compare(const OperatorTerm& o) const {
  // Higher powers of m sort first so the rest-mass term leads printed output.
  if (auto c = o.mpow <=> mpow; c != 0) return c;
  if (auto c = fields.size() <=> o.fields.size(); c != 0) return c;
  for (std::size_t k = 0; k < fields.size(); ++k)
    if (auto c = fields[k] <=> o.fields[k]; c != 0) return c;
  if (auto c = matrix <=> o.matrix; c != 0) return c;
  if (auto c = derivs <=> o.derivs; c != 0) return c;
  return coords <=> o.coords;
}

namespace {

bool in_window(const OperatorTerm& t, const Truncation& tr) {
  return t.mpow >= tr.min_mpow && t.mpow <= tr.max_mpow &&
         t.h_degree() <= tr.max_hdeg;
}

}  // namespace

OperatorExpr canonicalize(std::vector<OperatorTerm> ts, const Truncation& tr) {
  std::vector<OperatorTerm> kept;
  kept.reserve(ts.size());
  for (auto& t : ts) {
    if (t.coeff.is_zero()) continue;
    if (!in_window(t, tr)) continue;
    std::sort(t.fields.begin(), t.fields.end());
    for (const auto& f : t.fields)
      if (f.deriv_order() > tr.max_field_deriv)
        throw std::domain_error("field derivative order exceeds cap");
    kept.push_back(std::move(t));
  }
  std::sort(kept.begin(), kept.end(), [](const OperatorTerm& a, const OperatorTerm& b) {
    return a.key_compare(b) == std::strong_ordering::less;
  });
  std::vector<OperatorTerm> merged;
  for (auto& t : kept) {
    if (!merged.empty() && merged.back().key_equal(t))
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const OperatorTerm& t) { return t.coeff.is_zero(); });
  OperatorExpr e;
  e.terms_ = std::move(merged);
  return e;
}

OperatorExpr OperatorExpr::from_terms(std::vector<OperatorTerm> terms,
                                      const Truncation& tr) {
  return canonicalize(std::move(terms), tr);
}

OperatorExpr OperatorExpr::scalar(GaussianRational c) {
  OperatorTerm t;
  t.coeff = c;
  return from_terms({t});
}

OperatorExpr OperatorExpr::m_power(int k) {
  OperatorTerm t;
  t.coeff = GaussianRational(1);
  t.mpow = k;
  return from_terms({t});
}

OperatorExpr OperatorExpr::field(FieldSymbol f) {
  OperatorTerm t;
  t.coeff = GaussianRational(1);
  t.fields = {f};
  return from_terms({t});
}

OperatorExpr OperatorExpr::matrix_element(std::uint8_t b) {
  OperatorTerm t;
  t.coeff = GaussianRational(1);
  t.matrix = b;
  return from_terms({t});
}

OperatorExpr OperatorExpr::derivative(int axis) {
  if (axis < 1 || axis > 3) throw std::out_of_range("derivative axis");
  OperatorTerm t;
  t.coeff = GaussianRational(1);
  t.derivs[axis - 1] = 1;
  return from_terms({t});
}

OperatorExpr OperatorExpr::coordinate(int axis) {
  if (axis < 1 || axis > 3) throw std::out_of_range("coordinate axis");
  OperatorTerm t;
  t.coeff = GaussianRational(1);
  t.coords[axis - 1] = 1;
  return from_terms({t});
}

OperatorExpr OperatorExpr::sigma(int k) {
  auto s = DiracAlgebra::instance().sigma(k);
  OperatorTerm t;
  t.coeff = GaussianRational(1).times_i_pow(s.iphase);
  t.matrix = s.index;
  return from_terms({t});
}

bool OperatorExpr::contains_coordinates() const {
  for (const auto& t : terms_)
    if (!is_empty(t.coords)) return true;
  return false;
}

int OperatorExpr::max_field_deriv_order() const {
  int m = 0;
  for (const auto& t : terms_)
    for (const auto& f : t.fields) m = std::max(m, f.deriv_order());
  return m;
}

int OperatorExpr::max_deriv_order() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, order(t.derivs));
  return m;
}

bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (!a.terms_[k].key_equal(b.terms_[k])) return false;
    if (!(a.terms_[k].coeff == b.terms_[k].coeff)) return false;
  }
  return true;
}

OperatorExpr normal_form(const OperatorExpr& e, const Truncation& tr) {
  return canonicalize(e.terms(), tr);
}

OperatorExpr add(const OperatorExpr& a, const OperatorExpr& b, const Truncation& tr) {
  std::vector<OperatorTerm> ts = a.terms();
  ts.insert(ts.end(), b.terms().begin(), b.terms().end());
  return canonicalize(std::move(ts), tr);
}

OperatorExpr scale(const OperatorExpr& a, const GaussianRational& c) {
  // Scaling does not move any term's grade, so no window is applied; the
  // term order is untouched and only a zero scalar empties the expression.
  if (c.is_zero()) return OperatorExpr::zero();
  std::vector<OperatorTerm> ts = a.terms();
  for (auto& t : ts) t.coeff *= c;
  OperatorExpr e;
  e.give_terms(std::move(ts));
  return e;
}

namespace {

/// Multiplicative part of a term while a derivative monomial is pushed
/// through it from the left.
struct Pushed {
  GaussianRational coeff;
  MultiIndex coords;
  std::vector<FieldSymbol> fields;
  MultiIndex derivs;  // derivatives that have commuted all the way through
};

/// d_axis applied from the left: Leibniz over coordinates and fields, plus
/// the pass-through branch appended to the derivative monomial.
void apply_unit_derivative(int axis, const Pushed& p, std::vector<Pushed>& out) {
  if (p.coords[axis] > 0) {
    Pushed q = p;
    q.coeff *= GaussianRational(p.coords[axis]);
    q.coords[axis] -= 1;
    out.push_back(std::move(q));
  }
  for (std::size_t k = 0; k < p.fields.size(); ++k) {
    Pushed q = p;
    q.fields[k].deriv[axis] += 1;
    out.push_back(std::move(q));
  }
  Pushed q = p;
  q.derivs[axis] += 1;
  out.push_back(std::move(q));
}

void merge_index(MultiIndex& a, const MultiIndex& b) {
  for (int k = 0; k < 3; ++k) a[k] = std::uint8_t(a[k] + b[k]);
}

void multiply_terms(const OperatorTerm& a, const OperatorTerm& b,
                    std::vector<OperatorTerm>& out) {
  const auto& alg = DiracAlgebra::instance();

  std::vector<Pushed> parts{{GaussianRational(1), b.coords, b.fields, {0, 0, 0}}};
  std::vector<Pushed> next;
  for (int axis = 0; axis < 3; ++axis) {
    for (int rep = 0; rep < a.derivs[axis]; ++rep) {
      next.clear();
      for (const auto& p : parts) apply_unit_derivative(axis, p, next);
      std::swap(parts, next);
    }
  }

  auto mm = alg.multiply(a.matrix, b.matrix);
  GaussianRational base = (a.coeff * b.coeff).times_i_pow(mm.iphase);

  for (auto& p : parts) {
    OperatorTerm t;
    t.coeff = base * p.coeff;
    t.mpow = a.mpow + b.mpow;
    t.matrix = mm.index;
    t.coords = a.coords;
    merge_index(t.coords, p.coords);
    t.fields = a.fields;
    t.fields.insert(t.fields.end(), p.fields.begin(), p.fields.end());
    t.derivs = p.derivs;
    merge_index(t.derivs, b.derivs);
    out.push_back(std::move(t));
  }
}

}  // namespace

OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b,
                      const Truncation& tr) {
  std::vector<OperatorTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      // Grades only add, so products already outside the window on mpow-down
      // or h-degree can be skipped before Leibniz expansion.
      if (ta.mpow + tb.mpow < tr.min_mpow) continue;
      if (ta.h_degree() + tb.h_degree() > tr.max_hdeg) continue;
      multiply_terms(ta, tb, out);
    }
  return canonicalize(std::move(out), tr);
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b,
                        const Truncation& tr) {
  return add(multiply(a, b, tr), scale(multiply(b, a, tr), GaussianRational(-1)), tr);
}

OperatorExpr commutator_with_coordinate(const OperatorExpr& e, int axis,
                                        const Truncation& tr) {
  if (axis < 1 || axis > 3) throw std::out_of_range("coordinate axis");
  std::vector<OperatorTerm> out;
  for (const auto& t : e.terms()) {
    int cnt = t.derivs[axis - 1];
    if (cnt == 0) continue;
    OperatorTerm r = t;
    r.coeff *= GaussianRational(cnt);
    r.derivs[axis - 1] -= 1;
    out.push_back(std::move(r));
  }
  return canonicalize(std::move(out), tr);
}

namespace {

OperatorExpr adjoint_flat(const OperatorExpr& e, const Truncation& tr) {
  const auto& alg = DiracAlgebra::instance();
  OperatorExpr acc = OperatorExpr::zero();
  for (const auto& t : e.terms()) {
    // (x F M d^a)^dagger = (-1)^|a| d^a M^dagger F x; re-normal-order by
    // multiplying the derivative monomial back onto the scalar part.
    auto ad = alg.adjoint(t.matrix);
    OperatorTerm left;
    left.coeff = t.coeff.conj().times_i_pow(ad.iphase);
    if (order(t.derivs) % 2 == 1) left.coeff = -left.coeff;
    left.mpow = t.mpow;
    left.derivs = t.derivs;
    left.matrix = ad.index;

    OperatorTerm right;
    right.coeff = GaussianRational(1);
    right.fields = t.fields;
    right.coords = t.coords;

    acc = add(acc, multiply(OperatorExpr::from_terms({left}, tr),
                            OperatorExpr::from_terms({right}, tr), tr),
              tr);
  }
  return acc;
}

OperatorExpr measure_weight(Measure mu) {
  switch (mu) {
    case Measure::flat: return OperatorExpr::one();
    case Measure::sqrt_minus_g:
      // sqrt(-g) = 1 + h/2 to linear order, h the trace symbol.
      return OperatorExpr::one() +
             GaussianRational(Rational(1, 2)) *
                 OperatorExpr::field({FieldBase::htr});
    case Measure::sqrt_minus_3g: {
      // sqrt(-3g) = 1 - (h11 + h22 + h33)/2 to linear order.
      OperatorExpr s = OperatorExpr::one();
      for (FieldBase b : {FieldBase::h11, FieldBase::h22, FieldBase::h33})
        s = s - GaussianRational(Rational(1, 2)) * OperatorExpr::field({b});
      return s;
    }
  }
  throw std::logic_error("measure");
}

}  // namespace

OperatorExpr adjoint(const OperatorExpr& e, Measure mu, const Truncation& tr) {
  OperatorExpr flat = adjoint_flat(e, tr);
  if (mu == Measure::flat) return flat;
  OperatorExpr w = measure_weight(mu);
  // Inverse weight to linear order: 1/(1+s) = 1 - s.
  OperatorExpr winv = OperatorExpr::scalar(GaussianRational(2)) - w;
  return multiply(winv, multiply(flat, w, tr), tr);
}

OperatorExpr exp_conjugate(const OperatorExpr& S, const OperatorExpr& X,
                           const Truncation& tr) {
  for (const auto& t : S.terms())
    if (t.mpow > -1)
      throw GradingError(
          "exp_conjugate: generator has a term with m-power > -1; the "
          "conjugation series would not terminate at this truncation");
  OperatorExpr iS = scale(S, GaussianRational::unit_i());
  OperatorExpr acc = X;
  OperatorExpr nested = X;
  // ad_{iS} lowers the m-grade of every term, so the series leaves the
  // window after finitely many steps; the guard is a safety net.
  for (int k = 1; k <= 64; ++k) {
    nested = commutator(iS, nested, tr);
    nested = scale(nested, GaussianRational(Rational(1, k)));
    if (nested.is_zero()) return acc;
    acc = add(acc, nested, tr);
  }
  throw GradingError("exp_conjugate: series failed to terminate");
}

OperatorExpr even_part(const OperatorExpr& e, const Truncation& tr) {
  OperatorExpr b = OperatorExpr::beta();
  OperatorExpr bXb = multiply(b, multiply(e, b, tr), tr);
  return scale(add(e, bXb, tr), GaussianRational(Rational(1, 2)));
}

OperatorExpr odd_part(const OperatorExpr& e, const Truncation& tr) {
  OperatorExpr b = OperatorExpr::beta();
  OperatorExpr bXb = multiply(b, multiply(e, b, tr), tr);
  return scale(add(e, scale(bXb, GaussianRational(-1)), tr),
               GaussianRational(Rational(1, 2)));
}

OperatorExpr upper_block(const OperatorExpr& e, const Truncation& tr) {
  std::vector<OperatorTerm> out;
  for (const auto& t : e.terms()) {
    if (!DiracAlgebra::is_even(t.matrix))
      throw std::domain_error(
          "upper_block: expression has odd matrix content");
    OperatorTerm r = t;
    r.matrix = DiracAlgebra::strip_beta(t.matrix);
    out.push_back(std::move(r));
  }
  return canonicalize(std::move(out), tr);
}

bool is_two_component(const OperatorExpr& e) {
  for (const auto& t : e.terms())
    if (DiracAlgebra::has_beta(t.matrix) || !DiracAlgebra::is_even(t.matrix))
      return false;
  return true;
}

}  // namespace tempo
