#pragma once

#include <array>
#include <vector>

#include "sonar/core.hpp"
#include "sonar/field.hpp"

namespace sonar {

/// Local plane-wave decomposition of a Helmholtz solution on a circle of
/// radius r0/k: equispaced direction angles with the (complex) amplitude of
/// the plane wave crossing the circle center in each direction.
struct RayDecomposition {
  std::vector<double> angles;       // beta_l = 2 pi l / L, l = 0..L-1
  std::vector<double> amplitudes;   // |p_l|
  std::vector<cplx> complex_amplitudes;
  std::array<double, 2> center{0.0, 0.0};
  double r0 = 0;
  double epsilon_reg = 0;
  /// Compensation factor applied so an on-grid plane wave peaks at its true
  /// amplitude despite the regularization taper.
  double taper_norm = 1.0;
};

/// Per-segment backscatter template: |P_alpha| at the measurement grid.
struct BackscatterSignal {
  std::vector<double> values;
  std::vector<double> x_coords;
  double alpha = 0;
  double segment_width = 0;
};

inline constexpr double kDefaultR0 = 3.0 * M_PI;
inline constexpr double kDefaultEpsilonReg = 1e-6;

/// L = 2*Lhat + 1 with Lhat = ceil(r0 + 5 r0^{1/3}).
int truncation_order(double r0);

/// Field samples on the circle of radius r0/k at the L equispaced angles.
std::vector<cplx> sample_circle(const ComplexField& field, std::array<double, 2> center,
                                double k, double r0, int L);

/// Regularized Jacobi-Anger inversion of the circle samples into directional
/// plane-wave amplitudes.
RayDecomposition decompose(const std::vector<cplx>& samples, double r0, double epsilon_reg);

/// Linear interpolation of the amplitudes between bracketing grid angles.
double backscatter_at(const RayDecomposition& dec, double beta);

/// Complex sum of all directional amplitudes; for a field consisting of a
/// single plane wave this equals its amplitude exactly (leakage into
/// neighboring bins is coherent), making it the estimator of choice for
/// reflection-coefficient oracles.
double total_amplitude(const RayDecomposition& dec);

/// Discrete-dispersion-corrected wavenumber: the kappa for which a plane
/// wave at the given propagation angle satisfies the 5-point stencil with
/// continuum wavenumber k on a grid of spacing h. Sampling circles use
/// radius r0/k_eff so grid waves land on the analytic Bessel weights.
double effective_wavenumber(double k, double h, double angle);

/// Backscatter profile along the receiver line y = receiver_line_height for
/// n_segments segments starting at x = 0: decomposes the scattered field at
/// each measurement point and evaluates the amplitude at the backscatter
/// direction pi - alpha. threads: 0 = auto, 1 = serial reference.
BackscatterSignal backscatter_profile(const ComplexField& scattered,
                                      const ExperimentParams& exp, const DomainSpec& d,
                                      double r0, double epsilon_reg, int n_segments = 1,
                                      double x_start = 0.0, int threads = 0);

}  // namespace sonar
