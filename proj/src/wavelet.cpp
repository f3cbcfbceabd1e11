#include "sonar/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace sonar {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

std::size_t WaveletCoeffs::signal_length() const {
  std::size_t n = approx.size();
  for (const auto& v : details) n += v.size();
  return n;
}

const std::vector<double>& WaveletCoeffs::detail(int level) const {
  if (level < 1 || level > lmax) throw std::out_of_range("wavelet level out of range");
  return details[static_cast<std::size_t>(lmax - level)];
}

WaveletCoeffs dwt_multilevel(const std::vector<double>& signal, int lmax) {
  if (!power_of_two(signal.size()))
    throw std::invalid_argument("signal length must be a power of two");
  std::size_t n = signal.size();
  int n1 = 0;
  while ((1u << n1) < n) ++n1;
  if (lmax < 1 || lmax > n1)
    throw std::invalid_argument("lmax must satisfy 1 <= lmax <= log2(length)");

  WaveletCoeffs out;
  out.lmax = lmax;
  std::vector<double> a = signal;
  for (int l = 1; l <= lmax; ++l) {
    const std::size_t half = a.size() / 2;
    std::vector<double> next(half), det(half);
    for (std::size_t i = 0; i < half; ++i) {
      next[i] = (a[2 * i] + a[2 * i + 1]) * kInvSqrt2;
      det[i] = (a[2 * i] - a[2 * i + 1]) * kInvSqrt2;
    }
    out.details.insert(out.details.begin(), std::move(det));
    a = std::move(next);
  }
  out.approx = std::move(a);
  return out;
}

namespace {
// One synthesis stage: (a, d) of length n -> signal of length 2n.
std::vector<double> haar_synthesis(const std::vector<double>& a,
                                   const std::vector<double>& d) {
  if (a.size() != d.size())
    throw std::invalid_argument("approximation/detail length mismatch");
  std::vector<double> out(2 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[2 * i] = (a[i] + d[i]) * kInvSqrt2;
    out[2 * i + 1] = (a[i] - d[i]) * kInvSqrt2;
  }
  return out;
}
}  // namespace

std::vector<double> approx_at_level(const WaveletCoeffs& coeffs, int level) {
  if (level < 1 || level > coeffs.lmax) throw std::out_of_range("wavelet level out of range");
  std::vector<double> a = coeffs.approx;
  for (int l = coeffs.lmax; l > level; --l) a = haar_synthesis(a, coeffs.detail(l));
  return a;
}

std::vector<double> idwt_multilevel(const WaveletCoeffs& coeffs) {
  if (coeffs.lmax < 1 || coeffs.details.size() != static_cast<std::size_t>(coeffs.lmax))
    throw std::invalid_argument("inconsistent wavelet coefficients");
  std::vector<double> a = coeffs.approx;
  for (int l = coeffs.lmax; l >= 1; --l) a = haar_synthesis(a, coeffs.detail(l));
  return a;
}

}  // namespace sonar
