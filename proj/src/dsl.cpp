#include "tempo/dsl.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

namespace tempo {

namespace {

struct Token {
  enum Kind { kIdent, kInt, kSym, kEnd } kind;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::kEnd;
      tok_.text.clear();
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isalnum(static_cast<unsigned char>(s_[pos_])))
        step();
      tok_.kind = Token::kIdent;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        step();
      tok_.kind = Token::kInt;
      tok_.text = s_.substr(start, pos_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    if (std::string("+-*/^@(),").find(c) != std::string::npos) {
      tok_.kind = Token::kSym;
      tok_.text = std::string(1, c);
      step();
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line_,
                     col_);
  }

  void step() {
    ++pos_;
    ++col_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

/// Exact scalar monomial c * m^k, tracked symbolically during parsing so
/// that denominators like 1/(16*m^2) never materialize an out-of-window
/// power of m.
struct ScalarMono {
  GaussianRational c;
  long long mpow = 0;
};

/// Parse-time value: an ordinary expression, a scalar monomial, or the bare
/// vector symbol `p`, which only `p^2` may consume.
struct Value {
  OperatorExpr expr;
  std::optional<ScalarMono> mono;
  bool vector_p = false;

  static Value of(OperatorExpr e) { return {std::move(e), std::nullopt, false}; }
  static Value of(ScalarMono s) { return {OperatorExpr::zero(), s, false}; }
};

class Parser {
 public:
  Parser(const std::string& text, const Truncation& tr) : lex_(text), tr_(tr) {}

  OperatorExpr run() {
    Value v = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::kEnd)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line,
                       t.col);
    return materialize(v, t);
  }

 private:
  /// A parenthesized or top-level expression; stays a symbolic scalar
  /// monomial when it consists of a single scalar term, so denominators
  /// like (16*m^2) never hit the truncation window.
  Value parse_expr() {
    Value acc = parse_term();
    while (lex_.peek().kind == Token::kSym &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      Token op = lex_.take();
      Value rhs = parse_term();
      OperatorExpr a = materialize(acc, op);
      OperatorExpr b = materialize(rhs, op);
      acc = Value::of(op.text == "+" ? add(a, b, tr_) : add(a, -b, tr_));
    }
    return acc;
  }

  Value parse_term() {
    Value acc = parse_unary();
    while (lex_.peek().kind == Token::kSym &&
           (lex_.peek().text == "*" || lex_.peek().text == "@" ||
            lex_.peek().text == "/")) {
      Token op = lex_.take();
      Value rhs = parse_unary();
      if (op.text == "/") {
        ScalarMono inv = invert(rhs, op);
        acc = combine(acc, Value::of(inv), op);
      } else {
        acc = combine(acc, rhs, op);
      }
    }
    return acc;
  }

  Value combine(const Value& a, const Value& b, const Token& at) {
    if (a.mono && b.mono)
      return Value::of(ScalarMono{a.mono->c * b.mono->c, a.mono->mpow + b.mono->mpow});
    return Value::of(multiply(materialize(a, at), materialize(b, at), tr_));
  }

  Value parse_unary() {
    if (lex_.peek().kind == Token::kSym && lex_.peek().text == "-") {
      Token op = lex_.take();
      Value v = parse_unary();
      if (v.mono) return Value::of(ScalarMono{-v.mono->c, v.mono->mpow});
      return Value::of(-materialize(v, op));
    }
    return parse_power();
  }

  Value parse_power() {
    Value base = parse_primary();
    if (!(lex_.peek().kind == Token::kSym && lex_.peek().text == "^"))
      return base;
    Token caret = lex_.take();
    bool neg = false;
    if (lex_.peek().kind == Token::kSym && lex_.peek().text == "-") {
      lex_.take();
      neg = true;
    }
    const Token& t = lex_.peek();
    if (t.kind != Token::kInt)
      throw ParseError("exponent must be an integer", t.line, t.col);
    long long n = lex_.take().value * (neg ? -1 : 1);

    if (base.vector_p) {
      if (n != 2)
        throw ParseError("the vector symbol p is only usable as p^2",
                         caret.line, caret.col);
      OperatorExpr sq = OperatorExpr::zero();
      for (int j = 1; j <= 3; ++j) {
        OperatorExpr pj = momentum(j);
        sq = add(sq, multiply(pj, pj, tr_), tr_);
      }
      return Value::of(sq);
    }
    if (base.mono) {
      ScalarMono r{GaussianRational(1), 0};
      ScalarMono u = *base.mono;
      if (n < 0) {
        if (u.c.is_zero())
          throw ParseError("division by zero", caret.line, caret.col);
        u = {GaussianRational(1) / u.c, -u.mpow};
        n = -n;
      }
      for (long long k = 0; k < n; ++k)
        r = {r.c * u.c, r.mpow + u.mpow};
      return Value::of(r);
    }
    if (n < 0)
      throw ParseError("negative powers are only defined for scalars and m",
                       caret.line, caret.col);
    check_field_power(base.expr, n, caret);
    OperatorExpr acc = OperatorExpr::one();
    for (long long k = 0; k < n; ++k) acc = multiply(acc, base.expr, tr_);
    return Value::of(acc);
  }

  Value parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::kInt) {
      Token n = lex_.take();
      return Value::of(ScalarMono{GaussianRational(n.value), 0});
    }
    if (t.kind == Token::kSym && t.text == "(") {
      lex_.take();
      Value v = parse_expr();
      expect_sym(")");
      return v;
    }
    if (t.kind == Token::kIdent) {
      if (t.text == "D") return Value::of(parse_field_derivative());
      Token id = lex_.take();
      return atom(id);
    }
    throw ParseError("expected an operand, found '" + t.text + "'", t.line,
                     t.col);
  }

  OperatorExpr parse_field_derivative() {
    Token d = lex_.take();  // 'D'
    expect_sym("(");
    const Token& axt = lex_.peek();
    if (axt.kind != Token::kInt || axt.value < 1 || axt.value > 3)
      throw ParseError("D(j, field) needs an axis 1..3", axt.line, axt.col);
    int axis = int(lex_.take().value);
    expect_sym(",");
    Value inner = parse_primary();
    expect_sym(")");
    OperatorExpr e = materialize(inner, d);
    FieldSymbol f = single_field(e, d);
    f.deriv[axis - 1] += 1;
    if (f.deriv_order() > tr_.max_field_deriv)
      throw ParseError("field derivative order exceeds the supported cap",
                       d.line, d.col);
    return OperatorExpr::field(f);
  }

  Value atom(const Token& id) {
    static const std::map<std::string, FieldBase> fields = {
        {"phi", FieldBase::phi}, {"g1", FieldBase::g1}, {"g2", FieldBase::g2},
        {"g3", FieldBase::g3},   {"h", FieldBase::htr},
    };
    const std::string& s = id.text;
    if (auto it = fields.find(s); it != fields.end())
      return Value::of(OperatorExpr::field({it->second}));
    if (s.size() == 3 && s[0] == 'h' && s[1] >= '1' && s[1] <= '3' &&
        s[2] >= '1' && s[2] <= '3')
      return Value::of(OperatorExpr::field({h_component(s[1] - '0', s[2] - '0')}));
    if (s.size() == 2 && s[0] == 'd' && s[1] >= '1' && s[1] <= '3')
      return Value::of(OperatorExpr::derivative(s[1] - '0'));
    if (s.size() == 2 && s[0] == 'x' && s[1] >= '1' && s[1] <= '3')
      return Value::of(OperatorExpr::coordinate(s[1] - '0'));
    if (s.size() == 2 && s[0] == 'p' && s[1] >= '1' && s[1] <= '3')
      return Value::of(momentum(s[1] - '0'));
    if (s == "p") return {OperatorExpr::zero(), std::nullopt, true};
    if (s == "beta") return Value::of(OperatorExpr::beta());
    if (s.size() == 6 && s.rfind("alpha", 0) == 0 && s[5] >= '1' && s[5] <= '3')
      return Value::of(OperatorExpr::alpha(s[5] - '0'));
    if (s.size() == 6 && s.rfind("sigma", 0) == 0 && s[5] >= '1' && s[5] <= '3')
      return Value::of(OperatorExpr::sigma(s[5] - '0'));
    if (s == "m") return Value::of(ScalarMono{GaussianRational(1), 1});
    if (s == "i") return Value::of(ScalarMono{GaussianRational::unit_i(), 0});
    throw ParseError("unknown symbol '" + s + "'", id.line, id.col);
  }

  /// p_j = -i (delta_jk + h_jk/2) d_k - (i/8) (d_j h).
  OperatorExpr momentum(int j) {
    const GaussianRational mi = -GaussianRational::unit_i();
    OperatorExpr e = mi * OperatorExpr::derivative(j);
    for (int k = 1; k <= 3; ++k) {
      OperatorExpr hjk = OperatorExpr::field({h_component(j, k)});
      e = add(e,
              (mi * GaussianRational(Rational(1, 2))) *
                  multiply(hjk, OperatorExpr::derivative(k), tr_),
              tr_);
    }
    FieldSymbol dh{FieldBase::htr};
    dh.deriv[j - 1] = 1;
    e = add(e, (mi * GaussianRational(Rational(1, 8))) * OperatorExpr::field(dh),
            tr_);
    return e;
  }

  OperatorExpr materialize(const Value& v, const Token& at) {
    if (v.vector_p)
      throw ParseError("the vector symbol p is only usable as p^2", at.line,
                       at.col);
    if (!v.mono) return v.expr;
    if (v.mono->mpow < tr_.min_mpow || v.mono->mpow > tr_.max_mpow)
      throw ParseError("m-power " + std::to_string(v.mono->mpow) +
                           " is outside the truncation window",
                       at.line, at.col);
    OperatorTerm t;
    t.coeff = v.mono->c;
    t.mpow = int(v.mono->mpow);
    return OperatorExpr::from_terms({t}, tr_);
  }

  ScalarMono invert(const Value& v, const Token& at) {
    ScalarMono s;
    if (v.mono) {
      s = *v.mono;
    } else if (v.expr.size() == 1) {
      const OperatorTerm& t = v.expr.terms()[0];
      if (!t.fields.empty() || !is_empty(t.derivs) || !is_empty(t.coords) ||
          t.matrix != DiracAlgebra::kIdentity)
        throw ParseError("division is only defined by scalar monomials",
                         at.line, at.col);
      s = {t.coeff, t.mpow};
    } else {
      throw ParseError("division is only defined by scalar monomials", at.line,
                       at.col);
    }
    if (s.c.is_zero()) throw ParseError("division by zero", at.line, at.col);
    return {GaussianRational(1) / s.c, -s.mpow};
  }

  void check_field_power(const OperatorExpr& base, long long n, const Token& at) {
    if (n < 2 || base.is_zero()) return;
    int min_hdeg = tr_.max_hdeg + 1;
    for (const auto& t : base.terms()) min_hdeg = std::min(min_hdeg, t.h_degree());
    if (min_hdeg >= 1 && n * min_hdeg > tr_.max_hdeg)
      throw ParseError("h-degree of the power is outside the truncation window",
                       at.line, at.col);
    long long max_mp = tr_.min_mpow - 1;
    for (const auto& t : base.terms())
      max_mp = std::max(max_mp, (long long)t.mpow);
    if (max_mp * n < tr_.min_mpow || (max_mp > 0 && max_mp * n > tr_.max_mpow))
      throw ParseError("m-power of the power is outside the truncation window",
                       at.line, at.col);
  }

  FieldSymbol single_field(const OperatorExpr& e, const Token& at) {
    if (e.size() == 1) {
      const OperatorTerm& t = e.terms()[0];
      if (t.coeff == GaussianRational(1) && t.mpow == 0 &&
          t.fields.size() == 1 && t.matrix == DiracAlgebra::kIdentity &&
          is_empty(t.derivs) && is_empty(t.coords))
        return t.fields[0];
    }
    throw ParseError("D(j, .) expects a field symbol", at.line, at.col);
  }

  void expect_sym(const std::string& s) {
    const Token& t = lex_.peek();
    if (t.kind != Token::kSym || t.text != s)
      throw ParseError("expected '" + s + "'", t.line, t.col);
    lex_.take();
  }

  Lexer lex_;
  Truncation tr_;
};

// ---------------------------------------------------------------------------
// Printing

/// Display text for each Dirac basis element together with the unit u such
/// that value(text) = u * basis; built once against the algebra itself.
struct MatrixDisplay {
  std::string text;         // empty for the identity
  GaussianRational unit{1};  // coefficient the displayed text carries
};

const std::array<MatrixDisplay, 16>& matrix_displays() {
  static const std::array<MatrixDisplay, 16> table = [] {
    const auto& alg = DiracAlgebra::instance();
    std::array<MatrixDisplay, 16> t;
    auto unit_of = [](int iphase) {
      return GaussianRational(1).times_i_pow(iphase);
    };
    for (int k = 0; k < 16; ++k) {
      int a = k & 7;
      std::string text;
      GaussianRational unit(1);
      switch (a) {
        case 0: text = ""; break;
        case 1: text = "alpha1"; break;
        case 2: text = "alpha2"; break;
        case 4: text = "alpha3"; break;
        case 3:
        case 5:
        case 6: {
          int which = (a == 6) ? 1 : (a == 5) ? 2 : 3;
          auto s = alg.sigma(which);
          text = "sigma" + std::to_string(which);
          // sigma_k = i^p * basis[a]  =>  value(text) = i^p * basis.
          unit = unit_of(s.iphase);
          break;
        }
        case 7: {
          // alpha1 * sigma1: compute its decomposition via the tables.
          auto s1 = alg.sigma(1);
          auto prod = alg.multiply(DiracAlgebra::kAlpha1, s1.index);
          text = "alpha1*sigma1";
          unit = unit_of((s1.iphase + prod.iphase) & 3);
          break;
        }
      }
      if (k & 8) text = text.empty() ? "beta" : text + "*beta";
      t[k] = {text, unit};
    }
    return t;
  }();
  return table;
}

std::string print_rational(const Rational& r) {
  return r.str();
}

/// Coefficient as a DSL factor. `lead_sign_flipped` reports whether a leading
/// minus was factored out for " - " joining.
std::string print_coeff(GaussianRational c, bool strip_one, bool* negated) {
  bool neg = (c.re < Rational(0)) || (c.re.is_zero() && c.im < Rational(0));
  if (negated) {
    *negated = neg;
    if (neg) c = -c;
  }
  if (c.im.is_zero()) {
    if (strip_one && c.re == Rational(1)) return "";
    return print_rational(c.re);
  }
  if (c.re.is_zero()) {
    if (c.im == Rational(1)) return "i";
    return print_rational(c.im) + "*i";
  }
  std::string im = c.im < Rational(0) ? " - " + print_rational(-c.im)
                                      : " + " + print_rational(c.im);
  return "(" + print_rational(c.re) + im + "*i)";
}

std::string print_field(const FieldSymbol& f) {
  std::string s = field_base_name(f.base);
  for (int axis = 2; axis >= 0; --axis)
    for (int k = 0; k < f.deriv[axis]; ++k)
      s = "D(" + std::to_string(axis + 1) + "," + s + ")";
  return s;
}

void append_monomial(std::vector<std::string>& parts, const char* sym,
                     const MultiIndex& m) {
  for (int axis = 0; axis < 3; ++axis) {
    if (m[axis] == 0) continue;
    std::string p = sym + std::to_string(axis + 1);
    if (m[axis] > 1) p += "^" + std::to_string(int(m[axis]));
    parts.push_back(p);
  }
}

std::string print_term(const OperatorTerm& t, bool* negated) {
  const auto& disp = matrix_displays()[t.matrix];
  // Fold the display unit into the coefficient: c*B = (c/u) * value(text).
  GaussianRational c = t.coeff / disp.unit;

  std::vector<std::string> parts;
  if (t.mpow != 0)
    parts.push_back(t.mpow == 1 ? "m" : "m^" + std::to_string(t.mpow));
  append_monomial(parts, "x", t.coords);
  for (const auto& f : t.fields) parts.push_back(print_field(f));
  if (!disp.text.empty()) parts.push_back(disp.text);
  append_monomial(parts, "d", t.derivs);

  std::string coeff = print_coeff(c, !parts.empty(), negated);
  std::string s = coeff;
  for (const auto& p : parts) {
    if (!s.empty()) s += "*";
    s += p;
  }
  return s;
}

}  // namespace

OperatorExpr parse_operator(const std::string& text, const Truncation& tr) {
  return Parser(text, tr).run();
}

std::string to_dsl(const OperatorExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    bool neg = false;
    std::string body = print_term(t, &neg);
    if (first) {
      out = neg ? "-" + body : body;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

}  // namespace tempo
