#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include "../src/quadrature.hpp"
#include "pae/wave.hpp"

namespace pae::oracle {
namespace {

const detail::GaussLegendre& rule16() {
  static const detail::GaussLegendre rule(16);
  return rule;
}

template <class F>
double panels(F&& f, double a, double b, double panel_width) {
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / panel_width)));
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = a + h * static_cast<double>(k);
    sum += rule16().integrate(f, lo, lo + h);
  }
  return sum;
}

// Panel count for an integrand oscillating with angular frequency ~omega.
double panel_for(double omega) { return std::min(0.5, 1.0 / std::max(1.0, omega)); }

std::size_t smooth_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace

double j1_integral(double x) {
  const double v = panels([x](double tau) { return std::cos(tau - x * std::sin(tau)); }, 0.0, kPi,
                          panel_for(std::abs(x)));
  return v / kPi;
}

double j0_integral(double x) {
  const double v = panels([x](double tau) { return std::cos(x * std::sin(tau)); }, 0.0, kPi,
                          panel_for(std::abs(x)));
  return v / kPi;
}

double irf_quadrature(double t, const BandSpec& band) {
  if (band.empty()) return 0.0;
  const double v = panels([t](double k) { return std::cos(k * t); }, band.kappa_min, band.kappa_max,
                          panel_for(std::abs(t)));
  return v / kPi;
}

double psf_hankel(double r, const BandSpec& band) {
  if (band.empty()) return 0.0;
  const double v = panels([r](double k) { return j0_integral(k * r) * k; }, band.kappa_min,
                          band.kappa_max, panel_for(std::abs(r)));
  return v / (2.0 * kPi);
}

SensorData bandpass_direct(const SensorData& m, const BandSpec& band, double padding) {
  std::size_t half = 0;
  if (m.causal()) {
    half = m.num_steps() - 1;
  } else {
    require(m.symmetric(), "bandpass_direct: window must be causal or symmetric");
    half = m.time_origin();
  }
  const std::size_t window = 2 * half + 1;
  const std::size_t len =
      padding <= 1.0 ? window : smooth_size(static_cast<std::size_t>(std::ceil(padding * window)));
  const auto L = static_cast<std::ptrdiff_t>(len);
  const double dk = 2.0 * kPi / (static_cast<double>(len) * m.dt());
  SensorData out(m.geometry(), m.dt(), window, half);
  std::vector<double> buf(len);
  std::vector<std::complex<double>> spec(len);
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const auto tr = m.trace(s);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(m.time_origin());
      double v = tr[n];
      if (m.causal() && n == 0) v *= 0.5;
      buf[static_cast<std::size_t>(((j % L) + L) % L)] += v;
    }
    for (std::ptrdiff_t k = 0; k < L; ++k) {
      const std::ptrdiff_t ks = k <= L / 2 ? k : k - L;
      if (!band.contains(dk * static_cast<double>(ks))) {
        spec[k] = 0.0;
        continue;
      }
      std::complex<double> acc = 0.0;
      for (std::ptrdiff_t j = 0; j < L; ++j) {
        const double ang = -2.0 * kPi * static_cast<double>((k * j) % L) / static_cast<double>(len);
        acc += buf[j] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      spec[k] = acc;
    }
    auto dst = out.trace(s);
    for (std::size_t n = 0; n < window; ++n) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(half);
      const std::ptrdiff_t jw = ((j % L) + L) % L;
      std::complex<double> acc = 0.0;
      for (std::ptrdiff_t k = 0; k < L; ++k) {
        if (spec[k] == 0.0) continue;
        const double ang = 2.0 * kPi * static_cast<double>((k * jw) % L) / static_cast<double>(len);
        acc += spec[k] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      dst[n] = acc.real() / static_cast<double>(len);
    }
  }
  return out;
}

SensorData mirror_even(const SensorData& m) {
  require(m.causal(), "mirror_even: causal traces only");
  const std::size_t half = m.num_steps() - 1;
  SensorData out(m.geometry(), m.dt(), 2 * half + 1, half);
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    const auto src = m.trace(s);
    auto dst = out.trace(s);
    for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = src[n >= half ? n - half : half - n];
  }
  return out;
}

Image psf_convolution_direct(const Image& f, const BandSpec& band) {
  const Grid& g = f.grid();
  const RadialKernel kernel(band);
  Image out(g);
  const double area = g.dx * g.dx;
  for (std::size_t oy = 0; oy < g.height; ++oy) {
    for (std::size_t ox = 0; ox < g.width; ++ox) {
      double acc = 0.0;
      for (std::size_t iy = 0; iy < g.height; ++iy) {
        for (std::size_t ix = 0; ix < g.width; ++ix) {
          const double v = f(ix, iy);
          if (v == 0.0) continue;
          const double r = g.dx * std::hypot(static_cast<double>(ox) - static_cast<double>(ix),
                                             static_cast<double>(oy) - static_cast<double>(iy));
          acc += v * kernel.psf(r);
        }
      }
      out(ox, oy) = acc * area;
    }
  }
  return out;
}

SensorData time_convolution_direct(const TimeKernel& kernel, const SensorData& m) {
  SensorData out(m.geometry(), m.dt(), m.num_steps(), m.time_origin());
  const auto c = static_cast<std::ptrdiff_t>(kernel.center());
  const auto n_steps = static_cast<std::ptrdiff_t>(m.num_steps());
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    const auto src = m.trace(s);
    auto dst = out.trace(s);
    for (std::ptrdiff_t n = 0; n < n_steps; ++n) {
      double acc = 0.0;
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kernel.samples.size()); ++j) {
        const std::ptrdiff_t i = n - (j - c);
        if (i >= 0 && i < n_steps) acc += kernel.samples[j] * src[i];
      }
      dst[n] = acc * m.dt();
    }
  }
  return out;
}

double bilinear_textbook(const Image& img, Point p) {
  const Grid& g = img.grid();
  double fx = (p.x - g.origin.x) / g.dx;
  double fy = (p.y - g.origin.y) / g.dx;
  fx = std::clamp(fx, 0.0, static_cast<double>(g.width - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(g.height - 1));
  const auto x0 = static_cast<std::size_t>(std::floor(fx));
  const auto y0 = static_cast<std::size_t>(std::floor(fy));
  const std::size_t x1 = std::min(x0 + 1, g.width - 1);
  const std::size_t y1 = std::min(y0 + 1, g.height - 1);
  const double a = fx - static_cast<double>(x0);
  const double b = fy - static_cast<double>(y0);
  return (1 - a) * (1 - b) * img(x0, y0) + a * (1 - b) * img(x1, y0) + (1 - a) * b * img(x0, y1) +
         a * b * img(x1, y1);
}

std::size_t disc_pixel_count(const Grid& g, Point center, double radius) {
  std::size_t count = 0;
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const Point p = g.position(ix, iy);
      if (std::hypot(p.x - center.x, p.y - center.y) <= radius) ++count;
    }
  }
  return count;
}

namespace {

void bessel_suite(std::ostream& os) {
  os << "# x bessel_j1 j1_integral\n";
  for (double x : {0.0, 0.5, 1.0, 2.5, 3.8317, 7.0, 13.9, 14.1, 25.0, 60.0}) {
    os << x << ' ' << bessel_j1(x) << ' ' << j1_integral(x) << '\n';
  }
}

void irf_suite(std::ostream& os) {
  const BandSpec band{0.4, 10.0};
  os << "# band [0.4, 10]\n# t irf irf_quadrature\n";
  for (double t : {0.0, 0.05, 0.3, 1.0, 2.0, 7.5}) {
    os << t << ' ' << irf(t, band) << ' ' << irf_quadrature(t, band) << '\n';
  }
}

void psf_suite(std::ostream& os) {
  const BandSpec band{0.4, 10.0};
  os << "# band [0.4, 10]\n# r psf psf_hankel\n";
  for (double r : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    os << r << ' ' << psf(r, band) << ' ' << psf_hankel(r, band) << '\n';
  }
}

void abel_suite(std::ostream& os) {
  const BandSpec band{0.4, 10.0};
  const std::vector<double> s{0.0, 0.2, 0.5, 1.0, 2.0};
  const auto a = abel_radial(band, s);
  os << "# band [0.4, 10]\n# s abel irf\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << s[i] << ' ' << a[i] << ' ' << irf(s[i], band) << '\n';
}

void wave_suite(std::ostream& os) {
  const double sigma = 4.0;
  auto f = [sigma](double x, double y) { return std::exp(-(x * x + y * y) / (2 * sigma * sigma)); };
  std::vector<double> t;
  for (int i = 0; i <= 12; ++i) t.push_back(5.0 * i);
  const auto p = wave_trace_oracle(f, {30.0, 0.0}, t);
  os << "# gaussian sigma 4, receiver (30, 0)\n# t p\n";
  for (std::size_t i = 0; i < t.size(); ++i) os << t[i] << ' ' << p[i] << '\n';
}

}  // namespace

std::string run_suite(const std::string& name) {
  std::ostringstream os;
  os << std::setprecision(12);
  const bool all = name == "all";
  bool matched = false;
  auto section = [&](const char* suite, auto&& body) {
    if (all || name == suite) {
      os << "[" << suite << "]\n";
      body(os);
      matched = true;
    }
  };
  section("bessel", bessel_suite);
  section("irf", irf_suite);
  section("psf", psf_suite);
  section("abel", abel_suite);
  section("wave", wave_suite);
  if (!matched) fail(ErrorKind::config, "unknown oracle suite '" + name + "' (bessel, irf, psf, abel, wave, all)");
  return os.str();
}

}  // namespace pae::oracle
