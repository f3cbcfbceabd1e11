#pragma once

#include <complex>
#include <vector>

namespace sonar {

using cplx = std::complex<double>;

/// Discretized complex pressure field on a uniform grid. Row-major storage,
/// index(i, j) = j*nx + i, x = x0 + i*dx, y = y0 + j*dy. When periodic_x is
/// set, samples taken outside [x0, x0 + nx*dx) wrap with the Floquet phase
/// factor wrap_phase per full width traversed.
struct ComplexField {
  int nx = 0, ny = 0;
  double dx = 0, dy = 0;
  double x0 = 0, y0 = 0;
  bool periodic_x = false;
  cplx wrap_phase{1.0, 0.0};
  std::vector<cplx> data;

  ComplexField() = default;
  ComplexField(int nx_, int ny_, double dx_, double dy_, double x0_, double y0_);

  double width() const { return nx * dx; }
  double height() const { return (ny - 1) * dy; }
  double ymax() const { return y0 + height(); }

  cplx& at(int i, int j) { return data[static_cast<std::size_t>(j) * nx + i]; }
  cplx at(int i, int j) const { return data[static_cast<std::size_t>(j) * nx + i]; }

  /// Bilinear interpolation; x wraps (with Floquet phase) when periodic_x,
  /// otherwise out-of-range x throws, as does out-of-range y.
  cplx sample(double x, double y) const;

  bool all_finite() const;
};

}  // namespace sonar
