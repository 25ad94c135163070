#include "tempo/selfcheck.hpp"

#include <complex>
#include <random>

#include "tempo/dsl.hpp"
#include "tempo/rewrite.hpp"

namespace tempo {

namespace {

OperatorExpr random_expr(std::mt19937& rng, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> mat(0, 15);
  std::uniform_int_distribution<int> dcount(0, 1);
  std::uniform_int_distribution<int> axis(0, 2);
  std::uniform_int_distribution<int> fbase(0, 10);
  std::uniform_int_distribution<int> coin(0, 1);

  std::vector<OperatorTerm> ts;
  int n = nterms(rng);
  for (int k = 0; k < n; ++k) {
    OperatorTerm t;
    t.coeff = GaussianRational(Rational(coeff(rng)), Rational(coeff(rng)));
    t.matrix = std::uint8_t(mat(rng));
    for (int d = dcount(rng); d > 0; --d) t.derivs[axis(rng)]++;
    if (coin(rng)) {
      FieldSymbol f{static_cast<FieldBase>(fbase(rng))};
      for (int d = dcount(rng); d > 0; --d) f.deriv[axis(rng)]++;
      t.fields.push_back(f);
    }
    ts.push_back(t);
  }
  return OperatorExpr::from_terms(std::move(ts));
}

}  // namespace

std::vector<IdentityCheck> opcore_selfchecks(unsigned seed) {
  std::vector<IdentityCheck> out;
  std::mt19937 rng(seed);

  auto push = [&](const std::string& name, bool ok, const std::string& why) {
    out.push_back({name, ok, ok ? "0" : why});
  };

  // Matrix-table fidelity against dense 4x4 complex products.
  {
    const auto& alg = DiracAlgebra::instance();
    bool ok = true;
    for (int a = 0; a < 16 && ok; ++a)
      for (int b = 0; b < 16 && ok; ++b) {
        auto prod = alg.multiply(std::uint8_t(a), std::uint8_t(b));
        auto ma = alg.matrix(std::uint8_t(a));
        auto mb = alg.matrix(std::uint8_t(b));
        auto mp = alg.matrix(prod.index);
        static const std::complex<double> ph[4] = {
            {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            std::complex<double> s = 0;
            for (int k = 0; k < 4; ++k) s += ma[r][k] * mb[k][c];
            if (std::abs(s - ph[prod.iphase & 3] * mp[r][c]) != 0.0) ok = false;
          }
      }
    push("property_matrix_table_fidelity", ok, "table/product mismatch");
  }

  // Canonical soundness: commutativity, associativity, distributivity.
  {
    bool ok = true;
    std::string why;
    for (int rep = 0; rep < 50 && ok; ++rep) {
      OperatorExpr a = random_expr(rng, 4);
      OperatorExpr b = random_expr(rng, 4);
      OperatorExpr c = random_expr(rng, 3);
      if (!(a + b == b + a)) { ok = false; why = "a+b != b+a"; }
      if (ok && !((a * b) * c == a * (b * c))) { ok = false; why = "(ab)c != a(bc)"; }
      if (ok && !(a * (b + c) == a * b + a * c)) { ok = false; why = "a(b+c) != ab+ac"; }
      if (ok && !(normal_form(a) == a)) { ok = false; why = "normal_form not idempotent"; }
    }
    push("property_canonical_soundness", ok, why);
  }

  // Leibniz completeness.
  {
    bool ok = true;
    for (int rep = 0; rep < 30 && ok; ++rep) {
      OperatorExpr e = random_expr(rng, 3);
      for (FieldBase base : {FieldBase::phi, FieldBase::g2, FieldBase::h13}) {
        OperatorExpr F = OperatorExpr::field({base});
        FieldSymbol df{base};
        df.deriv[0] = 1;
        OperatorExpr d1 = OperatorExpr::derivative(1);
        if (!(d1 * (F * e) == F * (d1 * e) + OperatorExpr::field(df) * e))
          ok = false;
      }
    }
    push("property_leibniz_completeness", ok, "Leibniz defect");
  }

  // Adjoint involution under all three measures.
  {
    bool ok = true;
    for (int rep = 0; rep < 30 && ok; ++rep) {
      OperatorExpr e = random_expr(rng, 4);
      for (Measure mu :
           {Measure::flat, Measure::sqrt_minus_g, Measure::sqrt_minus_3g})
        if (!(adjoint(adjoint(e, mu), mu) == e)) ok = false;
    }
    push("property_adjoint_involution", ok, "involution defect");
  }

  // Rewrite idempotence and h-grading monotonicity.
  {
    bool ok = true;
    for (int rep = 0; rep < 30 && ok; ++rep) {
      OperatorExpr e = random_expr(rng, 5);
      OperatorExpr once = apply_rewrites(e);
      if (!(apply_rewrites(once) == once)) ok = false;
      OperatorExpr hexpr = parse_operator("h11 + D(2,g1)*beta");
      OperatorExpr prod = hexpr * e;
      for (const auto& t : prod.terms())
        if (t.h_degree() < 1) ok = false;
    }
    push("property_rewrite_idempotence_and_truncation", ok, "defect");
  }

  // Parse/print round trip.
  {
    bool ok = true;
    for (int rep = 0; rep < 50 && ok; ++rep) {
      OperatorExpr e = random_expr(rng, 5);
      std::string s = to_dsl(e);
      if (!(parse_operator(s) == e) || to_dsl(parse_operator(s)) != s) ok = false;
    }
    push("property_dsl_round_trip", ok, "round-trip mismatch");
  }

  return out;
}

}  // namespace tempo
