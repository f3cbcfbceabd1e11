#include "sonar/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "sonar/errors.hpp"

namespace sonar {

cplx incident_wave(double x, double y, const ExperimentParams& exp) {
  const double k = exp.wavenumber();
  const double kx = k * std::cos(exp.incident_angle);
  const double ky = -k * std::sin(exp.incident_angle);
  return exp.source_strength * std::exp(cplx(0.0, kx * x + ky * y));
}

double solver_grid_spacing(const MediumMap& medium, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s) {
  if (!s.valid()) throw std::invalid_argument("invalid solve spec");
  const double nodes_water = s.points_per_wavelength_water * exp.frequency / exp.water_speed;
  const double nodes_sed =
      s.points_per_wavelength_sediment * exp.frequency / medium.min_sediment_speed();
  const int per_segment =
      static_cast<int>(std::ceil(std::max(nodes_water, nodes_sed) * d.segment_width));
  return d.segment_width / per_segment;
}

SolveResult solve_helmholtz(const MediumMap& medium, const ExperimentParams& exp,
                            const DomainSpec& d, const SolveSpec& s, double width) {
  const double h = solver_grid_spacing(medium, exp, d, s);
  const double hw = d.water_height, hs = d.sediment_depth, Lp = s.pml_thickness;
  const double y0 = -hs - (s.bottom_pml ? Lp : 0.0);
  const int Nx = static_cast<int>(std::llround(width / h));
  if (std::abs(Nx * h - width) > 1e-9 * width)
    throw std::invalid_argument("solve width must be a multiple of the segment width");
  const int Ny = static_cast<int>(std::ceil((hw + Lp - y0) / h - 1e-9)) + 1;
  const double ymax = y0 + (Ny - 1) * h;
  const double lp_top = ymax - hw;
  const double lp_bot = s.bottom_pml ? (-hs - y0) : 0.0;

  const double omega = exp.omega();
  const double k0 = exp.wavenumber();
  const double kx = k0 * std::cos(exp.incident_angle);
  const cplx wall_phase = std::exp(cplx(0.0, kx * width));

  // Discrete vertical wavenumber of the incident wave so the injected plane
  // wave satisfies the discrete 5-point Helmholtz stencil exactly in water.
  const double ckx = (2.0 - 2.0 * std::cos(kx * h)) / (h * h);
  const double cos_kyh = 1.0 - 0.5 * h * h * (k0 * k0 - ckx);
  const double kyd = std::acos(std::clamp(cos_kyh, -1.0, 1.0)) / h;
  auto pinc = [&](double x, double y) {
    return exp.source_strength * std::exp(cplx(0.0, kx * x - kyd * y));
  };

  const int jinj = static_cast<int>(std::llround((hw - s.injection_offset - y0) / h));
  if (jinj <= 1 || jinj >= Ny - 2)
    throw std::invalid_argument("injection line outside solve domain");

  // Per-node material coefficients.
  const std::size_t N = static_cast<std::size_t>(Nx) * Ny;
  std::vector<double> rho(N);
  std::vector<cplx> K2(N);
  const double gamma_w = 0.0;
  for (int i = 0; i < Nx; ++i) {
    const double x = i * h;
    for (int j = 0; j < Ny; ++j) {
      const double y = y0 + j * h;
      const MediumSample m = medium.at(x, y);
      const double gamma =
          (m.attenuation_db > 0) ? attenuation_to_neper(m.attenuation_db) : gamma_w;
      const cplx K = omega / m.speed + cplx(0.0, gamma);
      rho[static_cast<std::size_t>(j) * Nx + i] = m.density;
      K2[static_cast<std::size_t>(j) * Nx + i] = K * K;
    }
  }

  // Complex PML stretch, quadratic profile above the water column (and below
  // the sediment when bottom_pml is on).
  auto stretch = [&](double y) -> cplx {
    if (y > hw && lp_top > 0) {
      const double t = (y - hw) / lp_top;
      return cplx(1.0, s.pml_strength * t * t);
    }
    if (s.bottom_pml && y < -hs && lp_bot > 0) {
      const double t = (-hs - y) / lp_bot;
      return cplx(1.0, s.pml_strength * t * t);
    }
    return cplx(1.0, 0.0);
  };
  std::vector<cplx> s_node(Ny), s_face(Ny - 1);
  for (int j = 0; j < Ny; ++j) s_node[j] = stretch(y0 + j * h);
  for (int j = 0; j < Ny - 1; ++j) s_face[j] = stretch(y0 + (j + 0.5) * h);

  using Trip = Eigen::Triplet<cplx>;
  std::vector<Trip> trips;
  trips.reserve(5 * N);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(N));
  auto idx = [&](int i, int j) { return static_cast<int>(j) * Nx + i; };

  for (int j = 0; j < Ny; ++j) {
    for (int i = 0; i < Nx; ++i) {
      const int n = idx(i, j);
      if (j == 0 || j == Ny - 1) {  // Dirichlet bottom, zero scattered top
        trips.emplace_back(n, n, cplx(1.0, 0.0));
        continue;
      }
      const double rc = rho[static_cast<std::size_t>(n)];
      cplx diag = K2[static_cast<std::size_t>(n)];
      // Horizontal neighbors with Floquet wrap; harmonic density averaging
      // at the cell face enforces continuity of p and (1/rho) dp/dn.
      for (int di : {-1, 1}) {
        const int ii = (i + di + Nx) % Nx;
        cplx ph(1.0, 0.0);
        if (i + di >= Nx) ph = wall_phase;
        if (i + di < 0) ph = cplx(1.0, 0.0) / wall_phase;
        const double rnb = rho[static_cast<std::size_t>(idx(ii, j))];
        const cplx beta = rc * (2.0 / (rc + rnb)) / (h * h);
        trips.emplace_back(n, idx(ii, j), beta * ph);
        diag -= beta;
      }
      // Vertical neighbors with PML stretch and TF/SF source corrections.
      const cplx sc = s_node[j];
      for (int dj : {-1, 1}) {
        const int jj = j + dj;
        const cplx fa = (dj == 1) ? s_face[j] : s_face[j - 1];
        const double rnb = rho[static_cast<std::size_t>(idx(i, jj))];
        const cplx beta = rc * (2.0 / (rc + rnb)) / (h * h) / (sc * fa);
        trips.emplace_back(n, idx(i, jj), beta);
        diag -= beta;
        if (j < jinj && jj >= jinj)
          rhs[n] -= beta * pinc(i * h, y0 + jj * h);
        else if (jj < jinj && j >= jinj)
          rhs[n] += beta * pinc(i * h, y0 + jj * h);
      }
      trips.emplace_back(n, n, diag);
    }
  }

  Eigen::SparseMatrix<cplx> A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("sparse factorization failed (singular or ill-conditioned system)");
  Eigen::VectorXcd p = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse solve failed");

  const double rhs_norm = rhs.norm();
  const double resid = (A * p - rhs).norm() / (rhs_norm > 0 ? rhs_norm : 1.0);
  if (!(resid <= 1e-8))
    throw NumericalError("discrete residual too large: " + std::to_string(resid));

  SolveResult out;
  out.h = h;
  out.kx = kx;
  out.kyd = kyd;
  out.width = width;
  out.total = ComplexField(Nx, Ny, h, h, 0.0, y0);
  out.total.periodic_x = true;
  out.total.wrap_phase = wall_phase;
  for (std::size_t n = 0; n < N; ++n) out.total.data[n] = p[static_cast<Eigen::Index>(n)];
  if (!out.total.all_finite()) throw NumericalError("non-finite values in solution");
  out.scattered = out.total;
  for (int j = 0; j < jinj; ++j)
    for (int i = 0; i < Nx; ++i) out.scattered.at(i, j) -= pinc(i * h, y0 + j * h);
  return out;
}

ComplexField discrete_incident_field(const SolveResult& sol, const ExperimentParams& exp) {
  ComplexField inc(sol.total.nx, sol.total.ny, sol.h, sol.h, 0.0, sol.total.y0);
  inc.periodic_x = true;
  inc.wrap_phase = sol.total.wrap_phase;
  for (int j = 0; j < inc.ny; ++j) {
    const double y = inc.y0 + j * sol.h;
    for (int i = 0; i < inc.nx; ++i)
      inc.at(i, j) =
          exp.source_strength * std::exp(cplx(0.0, sol.kx * i * sol.h - sol.kyd * y));
  }
  return inc;
}

SolveResult solve_template(const SeafloorParams& params, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s) {
  const MediumMap medium = build_medium(params, exp, d);
  return solve_helmholtz(medium, exp, d, s, s.domain_width_factor * d.segment_width);
}

SolveResult solve_transition(const SeafloorParams& left, const SeafloorParams& right,
                             const ExperimentParams& exp, const DomainSpec& d,
                             const SolveSpec& s) {
  const double half = s.domain_width_factor * d.segment_width;
  const MediumMap medium({{-1e30, half, left}, {half, 1e30, right}}, exp);
  return solve_helmholtz(medium, exp, d, s, 2.0 * half);
}

}  // namespace sonar
