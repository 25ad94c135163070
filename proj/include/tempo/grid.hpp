#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "tempo/metric.hpp"

namespace tempo {

using Complex = std::complex<double>;

/// Uniform periodic grid in d = 1..3 dimensions. Absent axes have a single
/// point; derivative directions along them vanish. Grid coordinates are
/// cell centers x_k = center - L/2 + (i + 1/2) dx.
struct GridSpec {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1, 1, 1};
  Vec3 center{0, 0, 0};

  std::size_t size() const {
    return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]);
  }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  double cell_volume() const {
    double v = 1;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
  }
  double coord(int axis, int index) const {
    return center[axis] - length[axis] / 2 + (index + 0.5) * spacing(axis);
  }
  std::size_t flat_index(int i, int j, int k) const {
    return (std::size_t(i) * n[1] + j) * n[2] + k;
  }
  bool operator==(const GridSpec&) const = default;
};

/// Two-component spinor wave function on the grid, with its time stamp.
struct SpinorGridState {
  GridSpec grid;
  std::vector<Complex> up;
  std::vector<Complex> dn;
  double time = 0;

  static SpinorGridState zeros(const GridSpec& g) {
    SpinorGridState s;
    s.grid = g;
    s.up.assign(g.size(), Complex(0));
    s.dn.assign(g.size(), Complex(0));
    return s;
  }
};

struct WavepacketSpec {
  Vec3 center{0, 0, 0};
  Vec3 width{1, 1, 1};       // position standard deviations
  Vec3 momentum{0, 0, 0};    // mean momentum per axis
  double spin_theta = 0;     // polar angle of the spin direction
  double spin_phi = 0;       // azimuth
};

/// Gaussian envelope x plane wave x spinor (cos(t/2), e^{i p} sin(t/2)),
/// normalized in the curved measure. Throws when the packet support violates
/// the boundary margin or the grid cannot resolve the momentum.
SpinorGridState init_wavepacket(const GridSpec& grid, const WavepacketSpec& w,
                                const MetricModel& model);

/// Curved-measure norm^2: sum sqrt(-3g) (|up|^2 + |dn|^2) dV.
double curved_norm_squared(const SpinorGridState& s, const MetricModel& model);

/// Total probability within `cells` cells of any boundary (flat density;
/// used for the support invariant).
double boundary_probability(const SpinorGridState& s, int cells);

/// Smooth window over the grid box: exactly 1 in the inner 80% of each axis,
/// rolls to 0 at 98%; fields are multiplied by it so their grid samples are
/// effectively periodic. The wavepacket support invariant keeps states away
/// from the seam.
double field_window(const GridSpec& g, const Vec3& x);

/// Forward/backward FFT workspace for both spinor components (FFTW, complex
/// in-place transforms of the grid layout).
class FourierWorkspace {
 public:
  explicit FourierWorkspace(const GridSpec& g);
  ~FourierWorkspace();
  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  /// In-place unnormalized forward transform.
  void forward(std::vector<Complex>& a) const;
  /// In-place backward transform scaled by 1/N (inverse of forward).
  void backward(std::vector<Complex>& a) const;

  /// Angular wavenumber of index i along an axis.
  double wavenumber(int axis, int index) const;
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  mutable std::vector<Complex> buffer_;
};

}  // namespace tempo
