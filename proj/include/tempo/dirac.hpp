#pragma once

#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace tempo {

/// The 16-element basis of the 4x4 Dirac matrix algebra in the standard
/// representation: beta = diag(1,1,-1,-1), alpha_j = offdiag(sigma_j).
///
/// Basis element k (0..15) is the ordered product
///   alpha1^a1 * alpha2^a2 * alpha3^a3 * beta^b,
/// where a1 = bit0(k), a2 = bit1(k), a3 = bit2(k), b = bit3(k).
/// Any product of two basis elements equals i^p times a basis element;
/// the (p, index) tables are generated once from the explicit matrices.
class DiracAlgebra {
 public:
  using Complex = std::complex<double>;
  using Mat4 = std::array<std::array<Complex, 4>, 4>;
  using Mat2 = std::array<std::array<Complex, 2>, 2>;

  struct Scaled {
    std::uint8_t index;   // basis element
    std::uint8_t iphase;  // power of i in 0..3
  };

  static const DiracAlgebra& instance() {
    static const DiracAlgebra alg;
    return alg;
  }

  Scaled multiply(std::uint8_t a, std::uint8_t b) const { return mul_[a][b]; }
  Scaled adjoint(std::uint8_t a) const { return adj_[a]; }

  /// Even elements commute with beta (even number of alpha factors).
  static bool is_even(std::uint8_t a) { return (std::popcount(unsigned(a & 7)) & 1) == 0; }
  static bool has_beta(std::uint8_t a) { return (a & 8) != 0; }
  static std::uint8_t strip_beta(std::uint8_t a) { return a & 7; }

  /// Exact integer-complex entries {re, im} of the basis matrices.
  struct IEntry {
    int re, im;
  };
  using IMat4 = std::array<std::array<IEntry, 4>, 4>;
  const IMat4& imatrix(std::uint8_t a) const { return basis_[a]; }

  Mat4 matrix(std::uint8_t a) const {
    Mat4 m{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        m[r][c] = Complex(basis_[a][r][c].re, basis_[a][r][c].im);
    return m;
  }

  /// Upper-left 2x2 block; meaningful for even elements, whose matrices are
  /// block diagonal.
  Mat2 upper_block(std::uint8_t a) const {
    Mat2 m{};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m[r][c] = Complex(basis_[a][r][c].re, basis_[a][r][c].im);
    return m;
  }

  static constexpr std::uint8_t kIdentity = 0;
  static constexpr std::uint8_t kAlpha1 = 1;
  static constexpr std::uint8_t kAlpha2 = 2;
  static constexpr std::uint8_t kAlpha3 = 4;
  static constexpr std::uint8_t kBeta = 8;

  static std::uint8_t alpha(int j) {
    switch (j) {
      case 1: return kAlpha1;
      case 2: return kAlpha2;
      case 3: return kAlpha3;
    }
    throw std::out_of_range("alpha axis");
  }

  /// Sigma_k = diag(sigma_k, sigma_k) written as i^p * basis element.
  Scaled sigma(int k) const {
    switch (k) {
      case 1: return sigma_[0];
      case 2: return sigma_[1];
      case 3: return sigma_[2];
    }
    throw std::out_of_range("sigma axis");
  }

 private:
  DiracAlgebra() {
    // Generators as exact integer-complex matrices.
    IMat4 id{}, a1{}, a2{}, a3{}, beta{};
    for (int r = 0; r < 4; ++r) id[r][r] = {1, 0};
    // Pauli blocks: alpha_j = [[0, s_j], [s_j, 0]].
    auto set_offdiag = [](IMat4& m, const std::array<std::array<IEntry, 2>, 2>& s) {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          m[r][c + 2] = s[r][c];
          m[r + 2][c] = s[r][c];
        }
    };
    set_offdiag(a1, {{{{{0, 0}, {1, 0}}}, {{{1, 0}, {0, 0}}}}});
    set_offdiag(a2, {{{{{0, 0}, {0, -1}}}, {{{0, 1}, {0, 0}}}}});
    set_offdiag(a3, {{{{{1, 0}, {0, 0}}}, {{{0, 0}, {-1, 0}}}}});
    beta[0][0] = beta[1][1] = {1, 0};
    beta[2][2] = beta[3][3] = {-1, 0};

    for (std::uint8_t k = 0; k < 16; ++k) {
      IMat4 m = id;
      if (k & 1) m = matmul(m, a1);
      if (k & 2) m = matmul(m, a2);
      if (k & 4) m = matmul(m, a3);
      if (k & 8) m = matmul(m, beta);
      basis_[k] = m;
    }
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b)
        mul_[a][b] = match(matmul(basis_[a], basis_[b]));
    for (int a = 0; a < 16; ++a) mul_ok(a);
    for (int a = 0; a < 16; ++a) adj_[a] = match(dagger(basis_[a]));

    // Sigma_k = diag(sigma_k, sigma_k) = -i * eps_{kij} alpha_i alpha_j / 2;
    // resolve each against the basis directly.
    IMat4 s1{}, s2{}, s3{};
    auto set_diag = [](IMat4& m, const std::array<std::array<IEntry, 2>, 2>& s) {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          m[r][c] = s[r][c];
          m[r + 2][c + 2] = s[r][c];
        }
    };
    set_diag(s1, {{{{{0, 0}, {1, 0}}}, {{{1, 0}, {0, 0}}}}});
    set_diag(s2, {{{{{0, 0}, {0, -1}}}, {{{0, 1}, {0, 0}}}}});
    set_diag(s3, {{{{{1, 0}, {0, 0}}}, {{{0, 0}, {-1, 0}}}}});
    sigma_[0] = match(s1);
    sigma_[1] = match(s2);
    sigma_[2] = match(s3);
  }

  static IEntry cmul(IEntry x, IEntry y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }

  static IMat4 matmul(const IMat4& x, const IMat4& y) {
    IMat4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        IEntry acc{0, 0};
        for (int k = 0; k < 4; ++k) {
          IEntry p = cmul(x[i][k], y[k][j]);
          acc.re += p.re;
          acc.im += p.im;
        }
        r[i][j] = acc;
      }
    return r;
  }

  static IMat4 dagger(const IMat4& x) {
    IMat4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i][j] = {x[j][i].re, -x[j][i].im};
    return r;
  }

  /// Find (phase, index) with m == i^phase * basis[index].
  Scaled match(const IMat4& m) const {
    for (std::uint8_t k = 0; k < 16; ++k) {
      for (std::uint8_t p = 0; p < 4; ++p) {
        IEntry ph = phase_entry(p);
        bool ok = true;
        for (int r = 0; r < 4 && ok; ++r)
          for (int c = 0; c < 4 && ok; ++c) {
            IEntry e = cmul(ph, basis_[k][r][c]);
            ok = (e.re == m[r][c].re && e.im == m[r][c].im);
          }
        if (ok) return {k, p};
      }
    }
    throw std::logic_error("matrix not proportional to a basis element");
  }

  static IEntry phase_entry(std::uint8_t p) {
    switch (p & 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

  void mul_ok(int a) const {
    // Associativity spot check against the generating matrices.
    if (mul_[a][0].index != a || mul_[0][a].index != a)
      throw std::logic_error("dirac table identity failure");
  }

  std::array<IMat4, 16> basis_{};
  std::array<std::array<Scaled, 16>, 16> mul_{};
  std::array<Scaled, 16> adj_{};
  std::array<Scaled, 3> sigma_{};
};

}  // namespace tempo
