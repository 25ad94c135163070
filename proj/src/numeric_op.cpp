#include "tempo/numeric_op.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "tempo/dirac.hpp"
#include "tempo/parallel.hpp"

namespace tempo {

GridOperator::GridOperator(const OperatorExpr& e, const MetricModel& model,
                           const GridSpec& grid, double mass,
                           std::shared_ptr<const FourierWorkspace> fft)
    : grid_(grid), fft_(std::move(fft)) {
  if (!is_two_component(e))
    throw std::domain_error(
        "GridOperator: expression has four-component matrix content");
  if (e.contains_coordinates())
    throw std::domain_error("GridOperator: coordinate factors not supported");
  if (e.max_deriv_order() > 2)
    throw std::domain_error("GridOperator: derivative order beyond 2");

  const auto& alg = DiracAlgebra::instance();
  constexpr int kZeroField = -2;
  std::map<std::vector<FieldSymbol>, int> field_slots;
  std::map<MultiIndex, int> deriv_slots;
  deriv_monomials_.push_back({0, 0, 0});
  deriv_slots[{0, 0, 0}] = 0;

  const std::size_t npts = grid.size();

  for (const auto& t : e.terms()) {
    CompiledTerm ct;
    ct.scalar = Complex(t.coeff.re.to_double(), t.coeff.im.to_double()) *
                std::pow(mass, t.mpow);
    auto block = alg.upper_block(t.matrix);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) ct.pauli[r][c] = block[r][c];

    if (!t.fields.empty()) {
      auto it = field_slots.find(t.fields);
      if (it == field_slots.end()) {
        std::vector<double> samples(npts, 1.0);
        MetricPointData p;
        bool nonzero = false;
        for (int i = 0; i < grid.n[0]; ++i)
          for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k) {
              Vec3 x{grid.coord(0, i), grid.coord(1, j), grid.coord(2, k)};
              model.eval(x, p);
              double win = field_window(grid, x);
              double v = 1;
              for (const auto& f : t.fields)
                v *= win * model.field_value(f, p);
              samples[grid.flat_index(i, j, k)] = v;
              nonzero = nonzero || v != 0.0;
            }
        it = field_slots.emplace(t.fields, nonzero ? int(field_samples_.size())
                                                   : kZeroField)
                 .first;
        if (nonzero) field_samples_.push_back(std::move(samples));
      }
      // Terms whose field product vanishes on the whole grid (absent metric
      // components for this model) contribute nothing and are dropped.
      if (it->second == kZeroField) continue;
      ct.field_slot = it->second;
    }

    auto dit = deriv_slots.find(t.derivs);
    if (dit == deriv_slots.end()) {
      dit = deriv_slots.emplace(t.derivs, int(deriv_monomials_.size())).first;
      deriv_monomials_.push_back(t.derivs);
    }
    ct.deriv_slot = dit->second;
    terms_.push_back(ct);
  }

  // Weight samples for the curved inner product.
  weight_.assign(npts, 1.0);
  {
    MetricPointData p;
    for (int i = 0; i < grid.n[0]; ++i)
      for (int j = 0; j < grid.n[1]; ++j)
        for (int k = 0; k < grid.n[2]; ++k) {
          Vec3 x{grid.coord(0, i), grid.coord(1, j), grid.coord(2, k)};
          model.eval(x, p);
          double win = field_window(grid, x);
          weight_[grid.flat_index(i, j, k)] =
              1 - win * (p.h[1][1] + p.h[2][2] + p.h[3][3]) / 2;
        }
  }

  // Stability bound: max |k|^a per axis from the grid Nyquist.
  double kmax[3] = {0, 0, 0};
  for (int a = 0; a < grid.dim; ++a)
    kmax[a] = std::numbers::pi / grid.spacing(a);
  for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
    const auto& ct = terms_[ti];
    double fmax = 1;
    if (ct.field_slot >= 0) {
      fmax = 0;
      for (double v : field_samples_[ct.field_slot])
        fmax = std::max(fmax, std::abs(v));
    }
    const MultiIndex& d = deriv_monomials_[ct.deriv_slot];
    double kfac = 1;
    for (int a = 0; a < 3; ++a)
      for (int r = 0; r < d[a]; ++r) kfac *= kmax[a];
    double pmax = 0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) pmax = std::max(pmax, std::abs(ct.pauli[r][c]));
    symbol_bound_ += std::abs(ct.scalar) * fmax * kfac * 2 * pmax;
  }
}

void GridOperator::apply(const SpinorGridState& in, SpinorGridState& out) const {
  if (!(in.grid == grid_))
    throw std::invalid_argument("GridOperator: grid mismatch");
  const std::size_t npts = grid_.size();

  // Spectral derivatives: transform once, multiply per monomial, invert.
  std::vector<Complex> up_hat, dn_hat;
  if (deriv_monomials_.size() > 1 || !is_empty(deriv_monomials_[0])) {
    up_hat = in.up;
    dn_hat = in.dn;
    fft_->forward(up_hat);
    fft_->forward(dn_hat);
  }

  std::vector<std::vector<Complex>> dup(deriv_monomials_.size()),
      ddn(deriv_monomials_.size());
  std::vector<Complex> buf(npts);
  for (std::size_t s = 0; s < deriv_monomials_.size(); ++s) {
    const MultiIndex& d = deriv_monomials_[s];
    if (is_empty(d)) {
      dup[s] = in.up;
      ddn[s] = in.dn;
      continue;
    }
    for (int comp = 0; comp < 2; ++comp) {
      const std::vector<Complex>& src = comp == 0 ? up_hat : dn_hat;
      buf = src;
      std::size_t idx = 0;
      for (int i = 0; i < grid_.n[0]; ++i)
        for (int j = 0; j < grid_.n[1]; ++j)
          for (int k = 0; k < grid_.n[2]; ++k, ++idx) {
            Complex mult(1, 0);
            int ijk[3] = {i, j, k};
            for (int a = 0; a < 3; ++a)
              for (int r = 0; r < d[a]; ++r)
                mult *= Complex(0, fft_->wavenumber(a, ijk[a]));
            buf[idx] *= mult;
          }
      fft_->backward(buf);
      (comp == 0 ? dup[s] : ddn[s]) = buf;
    }
  }

  SpinorGridState res = SpinorGridState::zeros(grid_);
  res.time = in.time;
  // Point-major accumulation over disjoint ranges: bitwise deterministic
  // for any worker-thread count.
  parallel_for_chunks(npts, [&](std::size_t b, std::size_t e) {
    for (const auto& ct : terms_) {
      const std::vector<Complex>& su = dup[ct.deriv_slot];
      const std::vector<Complex>& sd = ddn[ct.deriv_slot];
      const double* field =
          ct.field_slot >= 0 ? field_samples_[ct.field_slot].data() : nullptr;
      for (std::size_t p = b; p < e; ++p) {
        Complex c = ct.scalar;
        if (field) c *= field[p];
        Complex u = su[p], d = sd[p];
        res.up[p] += c * (ct.pauli[0][0] * u + ct.pauli[0][1] * d);
        res.dn[p] += c * (ct.pauli[1][0] * u + ct.pauli[1][1] * d);
      }
    }
  });
  out = std::move(res);
}

Complex GridOperator::expectation(const SpinorGridState& s) const {
  SpinorGridState es = SpinorGridState::zeros(grid_);
  apply(s, es);
  Complex acc(0, 0);
  const std::size_t npts = grid_.size();
  for (std::size_t p = 0; p < npts; ++p)
    acc += weight_[p] *
           (std::conj(s.up[p]) * es.up[p] + std::conj(s.dn[p]) * es.dn[p]);
  return acc * grid_.cell_volume();
}

double GridOperator::norm_squared(const SpinorGridState& s) const {
  double acc = 0;
  const std::size_t npts = grid_.size();
  for (std::size_t p = 0; p < npts; ++p)
    acc += weight_[p] * (std::norm(s.up[p]) + std::norm(s.dn[p]));
  return acc * grid_.cell_volume();
}

double coordinate_expectation(const SpinorGridState& s, const MetricModel& model,
                              int axis) {
  const GridSpec& g = s.grid;
  double acc = 0, norm = 0;
  MetricPointData p;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        Vec3 x{g.coord(0, i), g.coord(1, j), g.coord(2, k)};
        model.eval(x, p);
        double win = field_window(g, x);
        double w = 1 - win * (p.h[1][1] + p.h[2][2] + p.h[3][3]) / 2;
        std::size_t idx = g.flat_index(i, j, k);
        double d = w * (std::norm(s.up[idx]) + std::norm(s.dn[idx]));
        acc += d * x[axis - 1];
        norm += d;
      }
  return acc / norm;
}

}  // namespace tempo
