#include "tempo/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tempo {

namespace {

double smoothstep(double t) {
  // C-infinity step on [0,1]; keeps the windowed fields spectrally smooth,
  // so analytic field derivatives and grid derivatives stay consistent to
  // roundoff away from the seam.
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

double field_window(const GridSpec& g, const Vec3& x) {
  double w = 1;
  for (int a = 0; a < g.dim; ++a) {
    double rel = std::abs(x[a] - g.center[a]) / (g.length[a] / 2);
    // 1 below 0.8, 0 above 0.98.
    w *= 1 - smoothstep((rel - 0.8) / 0.18);
  }
  return w;
}

SpinorGridState init_wavepacket(const GridSpec& grid, const WavepacketSpec& w,
                                const MetricModel& model) {
  for (int a = 0; a < grid.dim; ++a) {
    double margin = grid.length[a] / 2 - std::abs(w.center[a] - grid.center[a]);
    if (6 * w.width[a] > margin)
      throw std::invalid_argument(
          "wavepacket support (6 widths) exceeds the grid boundary margin");
    if (std::abs(w.momentum[a]) * grid.spacing(a) > std::numbers::pi / 4)
      throw std::invalid_argument(
          "grid too coarse to resolve the packet momentum (|k| dx > pi/4)");
  }
  SpinorGridState s = SpinorGridState::zeros(grid);
  const Complex iu(0, 1);
  Complex spin_up = std::cos(w.spin_theta / 2);
  Complex spin_dn = std::exp(iu * w.spin_phi) * std::sin(w.spin_theta / 2);

  for (int i = 0; i < grid.n[0]; ++i)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int k = 0; k < grid.n[2]; ++k) {
        Vec3 x{grid.coord(0, i), grid.coord(1, j), grid.coord(2, k)};
        double q = 0, phase = 0;
        for (int a = 0; a < grid.dim; ++a) {
          double d = x[a] - w.center[a];
          q += d * d / (4 * w.width[a] * w.width[a]);
          phase += w.momentum[a] * x[a];
        }
        Complex amp = std::exp(-q) * std::exp(iu * phase);
        std::size_t idx = grid.flat_index(i, j, k);
        s.up[idx] = amp * spin_up;
        s.dn[idx] = amp * spin_dn;
      }

  double norm = std::sqrt(curved_norm_squared(s, model));
  for (auto& v : s.up) v /= norm;
  for (auto& v : s.dn) v /= norm;
  return s;
}

double curved_norm_squared(const SpinorGridState& s, const MetricModel& model) {
  const GridSpec& g = s.grid;
  double acc = 0;
  MetricPointData p;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        Vec3 x{g.coord(0, i), g.coord(1, j), g.coord(2, k)};
        model.eval(x, p);
        double win = field_window(g, x);
        // sqrt(-3g) = 1 - (h11+h22+h33)/2 at linear order, windowed to
        // periodicity like every other field sample.
        double weight = 1 - win * (p.h[1][1] + p.h[2][2] + p.h[3][3]) / 2;
        std::size_t idx = g.flat_index(i, j, k);
        acc += weight * (std::norm(s.up[idx]) + std::norm(s.dn[idx]));
      }
  return acc * g.cell_volume();
}

double boundary_probability(const SpinorGridState& s, int cells) {
  const GridSpec& g = s.grid;
  double acc = 0, total = 0;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        std::size_t idx = g.flat_index(i, j, k);
        double d = std::norm(s.up[idx]) + std::norm(s.dn[idx]);
        total += d;
        bool near = false;
        int ijk[3] = {i, j, k};
        for (int a = 0; a < g.dim; ++a)
          if (ijk[a] < cells || ijk[a] >= g.n[a] - cells) near = true;
        if (near) acc += d;
      }
  return total > 0 ? acc / total : 0;
}

FourierWorkspace::FourierWorkspace(const GridSpec& g) : grid_(g) {
  buffer_.assign(g.size(), Complex(0));
  int rank = g.dim;
  int dims[3] = {g.n[0], g.n[1], g.n[2]};
  // The flat layout is row-major over (i, j, k) with absent axes of size 1,
  // matching FFTW's row-major convention on the leading `rank` axes.
  auto* in = reinterpret_cast<fftw_complex*>(buffer_.data());
  plan_fwd_ = fftw_plan_dft(rank, dims, in, in, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft(rank, dims, in, in, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw plan failed");
}

FourierWorkspace::~FourierWorkspace() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void FourierWorkspace::forward(std::vector<Complex>& a) const {
  if (a.size() != grid_.size()) throw std::invalid_argument("fft size");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void FourierWorkspace::backward(std::vector<Complex>& a) const {
  if (a.size() != grid_.size()) throw std::invalid_argument("fft size");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
  double scale = 1.0 / double(grid_.size());
  for (auto& v : a) v *= scale;
}

double FourierWorkspace::wavenumber(int axis, int index) const {
  int n = grid_.n[axis];
  int f = index <= n / 2 ? index : index - n;
  // Highest mode has no conjugate partner; zero it for clean derivatives.
  if (n % 2 == 0 && index == n / 2) f = 0;
  return 2 * std::numbers::pi * f / grid_.length[axis];
}

}  // namespace tempo
