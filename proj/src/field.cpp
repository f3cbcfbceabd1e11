#include "sonar/field.hpp"

#include <cmath>
#include <stdexcept>

namespace sonar {

ComplexField::ComplexField(int nx_, int ny_, double dx_, double dy_, double x0_, double y0_)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_), x0(x0_), y0(y0_),
      data(static_cast<std::size_t>(nx_) * ny_, cplx{0.0, 0.0}) {
  if (nx_ <= 0 || ny_ <= 0 || dx_ <= 0 || dy_ <= 0)
    throw std::invalid_argument("invalid field dimensions");
}

cplx ComplexField::sample(double x, double y) const {
  const double w = width();
  cplx phase{1.0, 0.0};
  double xr = x - x0;
  if (periodic_x) {
    while (xr < 0) {
      xr += w;
      phase /= wrap_phase;
    }
    while (xr >= w) {
      xr -= w;
      phase *= wrap_phase;
    }
  } else if (xr < 0 || xr > (nx - 1) * dx) {
    throw std::out_of_range("sample x outside field domain");
  }
  const double yr = y - y0;
  if (yr < 0 || yr > height()) throw std::out_of_range("sample y outside field domain");

  int i = static_cast<int>(xr / dx);
  int j = static_cast<int>(yr / dy);
  if (j >= ny - 1) j = ny - 2;
  const double fx = xr / dx - i;
  const double fy = yr / dy - j;

  auto grid = [&](int ii, int jj) -> cplx {
    if (ii < nx) return at(ii, jj);
    // Right neighbor past the last column: periodic wrap to column 0 with
    // one full Floquet phase; in the non-periodic case ii == nx only when
    // fx == 0, where its weight vanishes.
    if (!periodic_x) return at(nx - 1, jj);
    return at(0, jj) * wrap_phase;
  };
  cplx v = grid(i, j) * ((1 - fx) * (1 - fy)) + grid(i + 1, j) * (fx * (1 - fy)) +
           grid(i, j + 1) * ((1 - fx) * fy) + grid(i + 1, j + 1) * (fx * fy);
  return v * phase;
}

bool ComplexField::all_finite() const {
  for (const auto& v : data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace sonar
