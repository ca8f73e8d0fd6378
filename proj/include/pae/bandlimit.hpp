#pragma once

// Band-limited texture machinery: the hard band-pass impulse response (IRF)
// in time, the matching radial point-spread function (PSF) in space, and the
// spectral operations that connect them.
//
// Normalization: the IRF is the 1D inverse Fourier transform of the band
// indicator and the PSF is the 2D inverse Fourier transform of the annulus
// indicator (forward transform unnormalized, inverse carrying (2 pi)^-n).
// With this pairing the Abel projection of the PSF equals the IRF exactly.

#include <span>
#include <vector>

#include "pae/core.hpp"

namespace pae {

/// Bessel function of the first kind, order 1. Power series below |x| = 14,
/// Hankel asymptotic expansion above; absolute error below 1e-12.
double bessel_j1(double x);

class RadialKernel {
 public:
  explicit RadialKernel(const BandSpec& band);

  const BandSpec& band() const { return band_; }

  /// (sin(k_max t) - sin(k_min t)) / (pi t), even in t, finite at 0.
  double irf(double t) const;
  /// (k_max J1(k_max r) - k_min J1(k_min r)) / (2 pi r), finite at 0.
  double psf(double r) const;
  /// Upper bound on |psf(r)| from |J1(z)| <= 0.8 / sqrt(z).
  double psf_envelope(double r) const;
  /// Abel projection 2 * int_{|s|}^inf psf(r) r / sqrt(r^2 - s^2) dr,
  /// truncated where the envelope falls below rel_cutoff * psf(0).
  double abel(double s, double rel_cutoff = 1e-6) const;

 private:
  BandSpec band_;
};

double irf(double t, const BandSpec& band);
double psf(double r, const BandSpec& band);
std::vector<double> abel_radial(const BandSpec& band, std::span<const double> s_samples);

/// Default zero-padding factor of every spectral operation.
inline constexpr double kDefaultPadding = 2.0;

/// Multiplies each trace's spectrum by the band indicator (edges inclusive).
/// Causal input is taken as the causal function (zero for t < 0, half weight
/// on the t = 0 sample); because the IRF is not causal the result lives on the
/// symmetric window [-(N-1) dt, (N-1) dt]. Two-sided symmetric input keeps its
/// window. padding <= 1 disables zero padding (exact for periodic traces).
SensorData apply_bandpass(const SensorData& m, const BandSpec& band,
                          double padding = kDefaultPadding);

/// Even extension. For causal traces this is the mirror m[|n|]; for two-sided
/// traces it is m(t) + m(-t). Realized through the spectral identity
/// FT(m_even) = 2 Re FT(m). Rejects windows that are neither causal nor
/// symmetric.
SensorData make_even(const SensorData& m);

/// Image-domain convolution with the PSF, realized as an annulus mask on the
/// zero-padded 2D spectrum.
Image convolve_psf(const Image& f, const BandSpec& band, double padding = kDefaultPadding);

/// Odd-length kernel sampled every dt, centered at samples.size() / 2.
struct TimeKernel {
  double dt = 1.0;
  std::vector<double> samples;
  std::size_t center() const { return samples.size() / 2; }
};

TimeKernel sample_irf(const BandSpec& band, double dt, std::size_t half_length);

/// Linear convolution in time, scaled by dt, evaluated on m's own window.
SensorData convolve_time(const TimeKernel& kernel, const SensorData& m);

}  // namespace pae
