#pragma once

// Independent reference computations used by the test suites and by the
// `oracle` CLI command. Each routine deliberately avoids the production code
// path it is meant to check (direct sums instead of FFTs, quadrature instead
// of series, and so on).

#include <string>
#include <vector>

#include "pae/bandlimit.hpp"
#include "pae/core.hpp"

namespace pae::oracle {

/// J1 from Bessel's integral (1/pi) int_0^pi cos(tau - x sin tau) dtau.
double j1_integral(double x);
/// J0 from (1/pi) int_0^pi cos(x sin tau) dtau.
double j0_integral(double x);

/// (1/pi) int_{kmin}^{kmax} cos(k t) dk by Gauss-Legendre panels.
double irf_quadrature(double t, const BandSpec& band);
/// (1/2pi) int_{kmin}^{kmax} J0(k r) k dk, the inverse Hankel transform of the annulus.
double psf_hankel(double r, const BandSpec& band);

/// apply_bandpass by O(L^2) direct DFT on the same padded circular buffer.
SensorData bandpass_direct(const SensorData& m, const BandSpec& band, double padding);

/// Index mirror m_even[n] = m[|n|] on the symmetric window.
SensorData mirror_even(const SensorData& m);

/// out(x) = dx^2 sum_y f(y) psf(|x - y|) over every pixel pair.
Image psf_convolution_direct(const Image& f, const BandSpec& band);

/// convolve_time by the direct O(N K) sum.
SensorData time_convolution_direct(const TimeKernel& kernel, const SensorData& m);

/// Four-point bilinear formula with explicit clamping.
double bilinear_textbook(const Image& img, Point p);

/// Number of pixel centers inside the disc.
std::size_t disc_pixel_count(const Grid& g, Point center, double radius);

/// Reference values for a named suite, formatted as text lines.
/// Suites: bessel, irf, psf, abel, wave, all.
std::string run_suite(const std::string& name);

}  // namespace pae::oracle
