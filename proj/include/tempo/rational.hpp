#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tempo {

/// Exact rational number on 64-bit integers. Denominator is kept positive
/// and the fraction reduced after every operation; overflow of the reduced
/// result throws instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
  }

  double to_double() const { return double(num_) / double(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  using i128 = __int128;

  static Rational make(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = std::int64_t(n);
    r.den_ = std::int64_t(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void reduce() { *this = make(num_, den_); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Gaussian rational a + b*i, the coefficient field of the operator algebra.
/// All identity checks in the symbolic layer are exact zero tests on these.
struct GaussianRational {
  Rational re;
  Rational im;

  constexpr GaussianRational() = default;
  constexpr GaussianRational(std::int64_t n) : re(n), im(0) {}
  GaussianRational(Rational r) : re(r), im(0) {}
  GaussianRational(Rational r, Rational i) : re(r), im(i) {}

  static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  GaussianRational conj() const { return {re, -im}; }

  friend GaussianRational operator+(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a,
                                    const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw std::domain_error("division by zero coefficient");
    return a * GaussianRational{b.re / n, -(b.im / n)};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& b) {
    return *this = *this + b;
  }
  GaussianRational& operator*=(const GaussianRational& b) {
    return *this = *this * b;
  }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  /// Multiply by i^k, k in 0..3. Used when folding Dirac-table phases
  /// into coefficients.
  GaussianRational times_i_pow(int k) const {
    GaussianRational r = *this;
    for (int j = 0; j < (k & 3); ++j) r = GaussianRational{-r.im, r.re};
    return r;
  }
};

}  // namespace tempo
