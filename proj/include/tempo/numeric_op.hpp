#pragma once

#include <memory>

#include "tempo/algebra.hpp"
#include "tempo/grid.hpp"

namespace tempo {

/// A two-component canonical operator expression compiled against one grid
/// and metric model: field factors are sampled (windowed) once, derivatives
/// act spectrally, the matrix factor acts as a 2x2 block on (up, dn).
/// Exact for band-limited states up to roundoff.
class GridOperator {
 public:
  GridOperator(const OperatorExpr& e, const MetricModel& model,
               const GridSpec& grid, double mass,
               std::shared_ptr<const FourierWorkspace> fft);

  /// out = e(in); `out` may alias any state of the right grid.
  void apply(const SpinorGridState& in, SpinorGridState& out) const;

  /// <s | e s> under the sqrt(-3g)-weighted inner product.
  Complex expectation(const SpinorGridState& s) const;

  /// Curved-measure norm^2 of a state using the cached weight samples.
  double norm_squared(const SpinorGridState& s) const;

  /// Crude operator-norm bound: sum over terms of |scalar| max|field|
  /// max|k|^derivs. Used for integrator stability bounds.
  double symbol_bound() const { return symbol_bound_; }

  const GridSpec& grid() const { return grid_; }

 private:
  struct CompiledTerm {
    Complex scalar;
    int field_slot = -1;  // -1: no field factor
    int deriv_slot = 0;
    std::array<std::array<Complex, 2>, 2> pauli;
  };

  GridSpec grid_;
  std::shared_ptr<const FourierWorkspace> fft_;
  std::vector<CompiledTerm> terms_;
  std::vector<std::vector<double>> field_samples_;
  std::vector<MultiIndex> deriv_monomials_;
  std::vector<double> weight_;  // sqrt(-3g) * window pattern
  double symbol_bound_ = 0;
};

/// Expectation of the coordinate operator x^axis (direct weighted sum).
double coordinate_expectation(const SpinorGridState& s, const MetricModel& model,
                              int axis);

}  // namespace tempo
