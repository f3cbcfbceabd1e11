#include "sonar/microlocal.hpp"

#include <cmath>
#include <stdexcept>

#include "sonar/parallel.hpp"

namespace sonar {

int truncation_order(double r0) {
  if (r0 <= 0) throw std::invalid_argument("r0 must be positive");
  const int lhat = static_cast<int>(std::ceil(r0 + 5.0 * std::cbrt(r0)));
  return 2 * lhat + 1;
}

std::vector<cplx> sample_circle(const ComplexField& field, std::array<double, 2> center,
                                double k, double r0, int L) {
  const double radius = r0 / k;
  std::vector<cplx> out(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    const double beta = 2.0 * M_PI * l / L;
    out[static_cast<std::size_t>(l)] =
        field.sample(center[0] + radius * std::cos(beta), center[1] + radius * std::sin(beta));
  }
  return out;
}

namespace {
// J_q(r0) for signed order q.
double bessel_signed(int q, double r0) {
  const double j = std::cyl_bessel_j(static_cast<double>(std::abs(q)), r0);
  return (q < 0 && (q & 1)) ? -j : j;
}
}  // namespace

RayDecomposition decompose(const std::vector<cplx>& samples, double r0, double epsilon_reg) {
  const int L = truncation_order(r0);
  if (static_cast<int>(samples.size()) != L)
    throw std::invalid_argument("sample count does not match truncation order");
  const int lhat = (L - 1) / 2;

  // Forward DFT (direct O(L^2); L is small and typically prime). Twiddles
  // depend only on q*l mod L, so a length-L table suffices.
  std::vector<cplx> twiddle(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m)
    twiddle[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * M_PI * m / L);
  std::vector<cplx> F(static_cast<std::size_t>(L));
  for (int q = 0; q < L; ++q) {
    cplx acc{0.0, 0.0};
    for (int l = 0; l < L; ++l)
      acc += samples[static_cast<std::size_t>(l)] *
             std::conj(twiddle[static_cast<std::size_t>((q * l) % L)]);
    F[static_cast<std::size_t>(q)] = acc;
  }

  // Per-mode filter: multiply bin q by L*J_q / (i^q (L^2 J_q^2 + 4 eps pi^2)),
  // with q the signed order. The Tikhonov term attenuates modes where J_q is
  // tiny; taper_sum compensates so an on-grid unit plane wave peaks at 1.
  double taper_sum = 0.0;
  for (int qb = 0; qb < L; ++qb) {
    const int q = (qb <= lhat) ? qb : qb - L;
    const double Jq = bessel_signed(q, r0);
    const double denom = L * L * Jq * Jq + 4.0 * epsilon_reg * M_PI * M_PI;
    const cplx iq = std::polar(1.0, M_PI_2 * q);
    F[static_cast<std::size_t>(qb)] *= (L * Jq) / (iq * denom);
    taper_sum += L * L * Jq * Jq / denom;
  }
  const double norm = (taper_sum > 0) ? L / taper_sum : 1.0;

  RayDecomposition dec;
  dec.r0 = r0;
  dec.epsilon_reg = epsilon_reg;
  dec.taper_norm = norm;
  dec.angles.resize(static_cast<std::size_t>(L));
  dec.complex_amplitudes.resize(static_cast<std::size_t>(L));
  dec.amplitudes.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    cplx acc{0.0, 0.0};
    for (int q = 0; q < L; ++q)
      acc += F[static_cast<std::size_t>(q)] * twiddle[static_cast<std::size_t>((q * l) % L)];
    acc *= norm / static_cast<double>(L);  // inverse DFT scaling
    dec.angles[static_cast<std::size_t>(l)] = 2.0 * M_PI * l / L;
    dec.complex_amplitudes[static_cast<std::size_t>(l)] = acc;
    dec.amplitudes[static_cast<std::size_t>(l)] = std::abs(acc);
  }
  return dec;
}

double backscatter_at(const RayDecomposition& dec, double beta) {
  const int L = static_cast<int>(dec.amplitudes.size());
  if (L == 0) throw std::invalid_argument("empty decomposition");
  double b = std::fmod(beta, 2.0 * M_PI);
  if (b < 0) b += 2.0 * M_PI;
  const double t = b / (2.0 * M_PI / L);
  const int l = static_cast<int>(t) % L;
  const double fr = t - std::floor(t);
  return dec.amplitudes[static_cast<std::size_t>(l)] * (1.0 - fr) +
         dec.amplitudes[static_cast<std::size_t>((l + 1) % L)] * fr;
}

double total_amplitude(const RayDecomposition& dec) {
  cplx acc{0.0, 0.0};
  for (const auto& v : dec.complex_amplitudes) acc += v;
  // The all-bin complex sum is exact for a single plane wave only without
  // the peak-height taper compensation, so divide it back out.
  return std::abs(acc) / dec.taper_norm;
}

double effective_wavenumber(double k, double h, double angle) {
  const double c = std::abs(std::cos(angle));
  const double s = std::abs(std::sin(angle));
  auto resid = [&](double kap) {
    return (2.0 - 2.0 * std::cos(kap * c * h)) / (h * h) +
           (2.0 - 2.0 * std::cos(kap * s * h)) / (h * h) - k * k;
  };
  double lo = 0.5 * k, hi = 1.9 * k;
  if (resid(lo) > 0 || resid(hi) < 0) return k;  // out of bracket: no correction
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (resid(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BackscatterSignal backscatter_profile(const ComplexField& scattered,
                                      const ExperimentParams& exp, const DomainSpec& d,
                                      double r0, double epsilon_reg, int n_segments,
                                      double x_start, int threads) {
  const int L = truncation_order(r0);
  const double back = M_PI - exp.incident_angle;
  const double keff = effective_wavenumber(exp.wavenumber(), scattered.dx, exp.incident_angle);
  const double radius = r0 / keff;
  const double yc = d.receiver_line_height;
  if (yc - radius < scattered.y0 || yc + radius > scattered.ymax())
    throw std::out_of_range("observation circle exits the field domain");

  const int n = n_segments * d.samples_per_segment;
  const double dx = d.segment_width / d.samples_per_segment;

  BackscatterSignal sig;
  sig.alpha = exp.incident_angle;
  sig.segment_width = d.segment_width;
  sig.values.resize(static_cast<std::size_t>(n));
  sig.x_coords.resize(static_cast<std::size_t>(n));

  const int nthreads = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nthreads)
  for (int j = 0; j < n; ++j) {
    const double xc = x_start + j * dx;
    const auto samples = sample_circle(scattered, {xc, yc}, keff, r0, L);
    const auto dec = decompose(samples, r0, epsilon_reg);
    sig.values[static_cast<std::size_t>(j)] = backscatter_at(dec, back);
    sig.x_coords[static_cast<std::size_t>(j)] = xc;
  }
  return sig;
}

}  // namespace sonar
