#pragma once

// Thin RAII layer over FFTW real transforms. Planning is serialized because
// the FFTW planner is not thread safe; execution is not.

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace pae::detail {

/// Smallest 2^a 3^b 5^c 7^d >= n.
std::size_t good_fft_size(std::size_t n);

/// 1D real transform of fixed length. The spectrum has n/2 + 1 bins.
class RealFft1d {
 public:
  explicit RealFft1d(std::size_t n);
  ~RealFft1d();
  RealFft1d(const RealFft1d&) = delete;
  RealFft1d& operator=(const RealFft1d&) = delete;

  std::size_t size() const { return n_; }
  std::span<double> real() { return {real_, n_}; }
  std::span<std::complex<double>> spectrum() {
    return {reinterpret_cast<std::complex<double>*>(spec_), n_ / 2 + 1};
  }
  void forward();   // real -> spectrum
  void backward();  // spectrum -> real, scaled by 1/n

 private:
  std::size_t n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

/// 2D real transform on a row-major ny x nx buffer. The spectrum is
/// ny x (nx/2 + 1).
class RealFft2d {
 public:
  RealFft2d(std::size_t nx, std::size_t ny);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t spectrum_width() const { return nx_ / 2 + 1; }
  std::span<double> real() { return {real_, nx_ * ny_}; }
  std::span<std::complex<double>> spectrum() {
    return {reinterpret_cast<std::complex<double>*>(spec_), ny_ * spectrum_width()};
  }
  void forward();
  void backward();  // scaled by 1/(nx*ny)

 private:
  std::size_t nx_;
  std::size_t ny_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace pae::detail
