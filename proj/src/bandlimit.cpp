#include "pae/bandlimit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "quadrature.hpp"

namespace pae {
namespace {

// sin(x) / x with the removable singularity handled.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

// J1(z) / z, equal to 1/2 at z = 0.
double j1_over_z(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return 0.5 - z2 / 16.0 + z2 * z2 / 384.0;
  }
  return bessel_j1(z) / z;
}

std::size_t padded_length(std::size_t n, double padding) {
  if (padding <= 1.0) return n;
  return detail::good_fft_size(static_cast<std::size_t>(std::ceil(padding * static_cast<double>(n))));
}

void check_time_band(const BandSpec& band, double dt) {
  band.validate();
  if (band.kappa_max > kPi / dt) {
    std::ostringstream os;
    os << "band edge " << band.kappa_max << " exceeds the temporal Nyquist frequency " << kPi / dt;
    fail(ErrorKind::invalid_argument, os.str());
  }
}

// Half-width of the symmetric output window of the spectral time operations.
std::size_t output_half_width(const SensorData& m, const char* op) {
  if (m.causal()) return m.num_steps() - 1;
  if (m.symmetric()) return m.time_origin();
  fail(ErrorKind::invalid_argument,
       std::string(op) + ": traces must be causal or on a symmetric two-sided window");
}

// Loads one trace into the circular buffer with t = 0 at index 0 and negative
// times wrapped to the end. Causal traces get half weight at t = 0.
void load_circular(std::span<double> buf, const SensorData& m, std::size_t sensor) {
  std::fill(buf.begin(), buf.end(), 0.0);
  const auto tr = m.trace(sensor);
  const auto origin = static_cast<std::ptrdiff_t>(m.time_origin());
  const auto len = static_cast<std::ptrdiff_t>(buf.size());
  for (std::size_t n = 0; n < tr.size(); ++n) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(n) - origin;
    buf[static_cast<std::size_t>((j % len + len) % len)] += tr[n];
  }
  if (m.causal()) buf[0] -= 0.5 * tr[0];
}

void store_window(SensorData& out, std::size_t sensor, std::span<const double> buf) {
  auto tr = out.trace(sensor);
  const auto origin = static_cast<std::ptrdiff_t>(out.time_origin());
  const auto len = static_cast<std::ptrdiff_t>(buf.size());
  for (std::size_t n = 0; n < tr.size(); ++n) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(n) - origin;
    tr[n] = buf[static_cast<std::size_t>((j % len + len) % len)];
  }
}

}  // namespace

RadialKernel::RadialKernel(const BandSpec& band) : band_(band) { band_.validate(); }

double RadialKernel::irf(double t) const {
  const double a = band_.half_width();
  return (2.0 / kPi) * std::cos(band_.center() * t) * a * sinc(a * t);
}

double RadialKernel::psf(double r) const {
  const double kmax = band_.kappa_max;
  const double kmin = band_.kappa_min;
  r = std::abs(r);
  return (kmax * kmax * j1_over_z(kmax * r) - kmin * kmin * j1_over_z(kmin * r)) / (2.0 * kPi);
}

double RadialKernel::psf_envelope(double r) const {
  r = std::max(std::abs(r), 1e-300);
  return 0.8 * (std::sqrt(band_.kappa_max) + std::sqrt(band_.kappa_min)) / (2.0 * kPi * std::pow(r, 1.5));
}

double RadialKernel::abel(double s, double rel_cutoff) const {
  if (band_.empty()) return 0.0;
  s = std::abs(s);
  // Substituting r = sqrt(s^2 + u^2) removes the inverse square root.
  const double peak = psf(0.0);
  const double c = 0.8 * (std::sqrt(band_.kappa_max) + std::sqrt(band_.kappa_min)) /
                   (2.0 * kPi * rel_cutoff * peak);
  const double r_max = std::max(std::pow(c, 2.0 / 3.0), 2.0 * s);
  const double u_max = std::sqrt(r_max * r_max - s * s);
  const double panel = 0.5 * kPi / band_.kappa_max;
  static const detail::GaussLegendre rule(8);
  const auto panels = static_cast<std::size_t>(std::ceil(u_max / panel));
  auto integrand = [&](double u) { return psf(std::sqrt(s * s + u * u)); };
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) * panel;
    sum += rule.integrate(integrand, a, std::min(a + panel, u_max));
  }
  return 2.0 * sum;
}

double irf(double t, const BandSpec& band) { return RadialKernel(band).irf(t); }
double psf(double r, const BandSpec& band) { return RadialKernel(band).psf(r); }

std::vector<double> abel_radial(const BandSpec& band, std::span<const double> s_samples) {
  const RadialKernel kernel(band);
  std::vector<double> out(s_samples.size());
  for (std::size_t i = 0; i < s_samples.size(); ++i) {
    const double s = s_samples[i];
    require(std::isfinite(s), "abel_radial: sample positions must be finite");
    out[i] = kernel.abel(s);
    if (!std::isfinite(out[i])) fail(ErrorKind::runtime, "abel_radial: quadrature produced a non-finite value");
  }
  return out;
}

SensorData apply_bandpass(const SensorData& m, const BandSpec& band, double padding) {
  check_time_band(band, m.dt());
  const std::size_t half = output_half_width(m, "apply_bandpass");
  const std::size_t window = 2 * half + 1;
  SensorData out(m.geometry(), m.dt(), window, half);
  detail::RealFft1d fft(padded_length(window, padding));
  const std::size_t len = fft.size();
  const double dk = 2.0 * kPi / (static_cast<double>(len) * m.dt());
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    load_circular(fft.real(), m, s);
    fft.forward();
    auto spec = fft.spectrum();
    for (std::size_t k = 0; k < spec.size(); ++k) {
      if (!band.contains(dk * static_cast<double>(k))) spec[k] = 0.0;
    }
    fft.backward();
    store_window(out, s, fft.real());
  }
  return out;
}

SensorData make_even(const SensorData& m) {
  const std::size_t half = output_half_width(m, "make_even");
  const std::size_t window = 2 * half + 1;
  SensorData out(m.geometry(), m.dt(), window, half);
  detail::RealFft1d fft(padded_length(window, kDefaultPadding));
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    load_circular(fft.real(), m, s);
    fft.forward();
    for (auto& c : fft.spectrum()) c = 2.0 * c.real();
    fft.backward();
    store_window(out, s, fft.real());
  }
  return out;
}

Image convolve_psf(const Image& f, const BandSpec& band, double padding) {
  band.validate();
  const Grid& g = f.grid();
  if (band.kappa_max > kPi / g.dx) {
    std::ostringstream os;
    os << "band edge " << band.kappa_max << " exceeds the grid Nyquist frequency " << kPi / g.dx;
    fail(ErrorKind::invalid_argument, os.str());
  }
  detail::RealFft2d fft(padded_length(g.width, padding), padded_length(g.height, padding));
  auto buf = fft.real();
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) buf[iy * fft.nx() + ix] = f(ix, iy);
  }
  fft.forward();
  auto spec = fft.spectrum();
  const double dkx = 2.0 * kPi / (static_cast<double>(fft.nx()) * g.dx);
  const double dky = 2.0 * kPi / (static_cast<double>(fft.ny()) * g.dx);
  for (std::size_t ky = 0; ky < fft.ny(); ++ky) {
    const auto sky = static_cast<double>(ky <= fft.ny() / 2 ? static_cast<std::ptrdiff_t>(ky)
                                                            : static_cast<std::ptrdiff_t>(ky) -
                                                                  static_cast<std::ptrdiff_t>(fft.ny()));
    for (std::size_t kx = 0; kx < fft.spectrum_width(); ++kx) {
      const double kappa = std::hypot(dkx * static_cast<double>(kx), dky * sky);
      if (!band.contains(kappa)) spec[ky * fft.spectrum_width() + kx] = 0.0;
    }
  }
  fft.backward();
  Image out(g);
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) out(ix, iy) = buf[iy * fft.nx() + ix];
  }
  return out;
}

TimeKernel sample_irf(const BandSpec& band, double dt, std::size_t half_length) {
  require(dt > 0.0, "sample_irf: dt must be positive");
  const RadialKernel kernel(band);
  TimeKernel k;
  k.dt = dt;
  k.samples.resize(2 * half_length + 1);
  for (std::size_t j = 0; j < k.samples.size(); ++j) {
    k.samples[j] = kernel.irf((static_cast<double>(j) - static_cast<double>(half_length)) * dt);
  }
  return k;
}

SensorData convolve_time(const TimeKernel& kernel, const SensorData& m) {
  require(kernel.samples.size() % 2 == 1, "convolve_time: kernel must have odd length");
  if (std::abs(kernel.dt - m.dt()) > 1e-12 * m.dt()) {
    fail(ErrorKind::invalid_argument, "convolve_time: kernel dt differs from the data dt");
  }
  const std::size_t n = m.num_steps();
  const std::size_t k = kernel.samples.size();
  const std::size_t c = kernel.center();
  SensorData out(m.geometry(), m.dt(), n, m.time_origin());
  detail::RealFft1d data_fft(detail::good_fft_size(n + k - 1));
  detail::RealFft1d kern_fft(data_fft.size());
  auto kb = kern_fft.real();
  std::fill(kb.begin(), kb.end(), 0.0);
  std::copy(kernel.samples.begin(), kernel.samples.end(), kb.begin());
  kern_fft.forward();
  const auto kspec = kern_fft.spectrum();
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    auto buf = data_fft.real();
    std::fill(buf.begin(), buf.end(), 0.0);
    const auto tr = m.trace(s);
    std::copy(tr.begin(), tr.end(), buf.begin());
    data_fft.forward();
    auto spec = data_fft.spectrum();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kspec[i] * m.dt();
    data_fft.backward();
    auto dst = out.trace(s);
    for (std::size_t i = 0; i < n; ++i) dst[i] = buf[i + c];
  }
  return out;
}

}  // namespace pae
