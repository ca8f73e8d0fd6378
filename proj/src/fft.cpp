#include "fft.hpp"

#include <mutex>
#include <new>

namespace pae::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
T* alloc(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

}  // namespace

std::size_t good_fft_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

RealFft1d::RealFft1d(std::size_t n) : n_(n) {
  real_ = alloc<double>(n);
  spec_ = alloc<fftw_complex>(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
}

RealFft1d::~RealFft1d() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft1d::forward() { fftw_execute(fwd_); }

void RealFft1d::backward() {
  fftw_execute(bwd_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) real_[i] *= scale;
}

RealFft2d::RealFft2d(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
  real_ = alloc<double>(nx * ny);
  spec_ = alloc<fftw_complex>(ny * (nx / 2 + 1));
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_2d(static_cast<int>(ny), static_cast<int>(nx), real_, spec_, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_2d(static_cast<int>(ny), static_cast<int>(nx), spec_, real_, FFTW_ESTIMATE);
}

RealFft2d::~RealFft2d() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft2d::forward() { fftw_execute(fwd_); }

void RealFft2d::backward() {
  fftw_execute(bwd_);
  const double scale = 1.0 / static_cast<double>(nx_ * ny_);
  for (std::size_t i = 0; i < nx_ * ny_; ++i) real_[i] *= scale;
}

}  // namespace pae::detail
