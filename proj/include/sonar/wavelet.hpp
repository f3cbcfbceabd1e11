#pragma once

#include <vector>

namespace sonar {

/// Multilevel orthonormal Haar coefficients of a length-2^N1 signal:
/// the level-lmax approximation followed by detail vectors for levels
/// lmax down to 1. details[0] is level lmax, details[lmax-1] is level 1.
struct WaveletCoeffs {
  std::vector<double> approx;                // w^lmax, length 2^{N1-lmax}
  std::vector<std::vector<double>> details;  // v^lmax ... v^1
  int lmax = 0;

  std::size_t signal_length() const;
  const std::vector<double>& detail(int level) const;  // level in [1, lmax]
};

/// Orthonormal Haar analysis: (a+b)/sqrt2 -> approximation,
/// (a-b)/sqrt2 -> detail, downsampled by 2, repeated lmax times.
WaveletCoeffs dwt_multilevel(const std::vector<double>& signal, int lmax);

/// Exact inverse of dwt_multilevel up to floating-point roundoff.
std::vector<double> idwt_multilevel(const WaveletCoeffs& coeffs);

/// Level-l approximation vector w^l, reconstructed by partial inverse
/// transform from the stored approximation and the details coarser than l.
/// level = lmax returns the stored approximation.
std::vector<double> approx_at_level(const WaveletCoeffs& coeffs, int level);

}  // namespace sonar
