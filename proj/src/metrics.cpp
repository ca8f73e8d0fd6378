#include "pae/metrics.hpp"

#include <cmath>

#include "pae/phantom.hpp"

namespace pae {
namespace {

void check_pair(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask) {
  require(u.grid == u0.grid, "metrics: displacement grids differ");
  require(mask.empty() || mask.size() == u.grid.size(), "metrics: mask size differs from the grid");
}

template <class F>
double masked_mean(std::size_t n, std::span<const std::uint8_t> mask, bool allow_all, F&& value) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.empty() ? !allow_all : mask[i] == 0) continue;
    sum += value(i);
    ++count;
  }
  if (count == 0) fail(ErrorKind::invalid_argument, "metrics: the evaluation mask is empty");
  return sum / static_cast<double>(count);
}

}  // namespace

Mask magnitude_mask(const DisplacementField& u0, double eps) {
  Mask m(u0.grid.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::hypot(u0.ux[i], u0.uy[i]) >= eps ? 1 : 0;
  return m;
}

double aae(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask) {
  check_pair(u, u0, mask);
  return masked_mean(u.grid.size(), mask, false, [&](std::size_t i) {
    double diff = std::abs(std::atan2(u.uy[i], u.ux[i]) - std::atan2(u0.uy[i], u0.ux[i]));
    if (diff > kPi) diff = 2.0 * kPi - diff;
    return diff;
  });
}

double aee(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask) {
  check_pair(u, u0, mask);
  return masked_mean(u.grid.size(), mask, true,
                     [&](std::size_t i) { return std::hypot(u.ux[i] - u0.ux[i], u.uy[i] - u0.uy[i]); });
}

double aee_rel(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask) {
  check_pair(u, u0, mask);
  return masked_mean(u.grid.size(), mask, false, [&](std::size_t i) {
    const double ref = std::hypot(u0.ux[i], u0.uy[i]);
    require(ref > 0.0, "aee_rel: mask includes a pixel where u0 vanishes");
    return std::hypot(u.ux[i] - u0.ux[i], u.uy[i] - u0.uy[i]) / ref;
  });
}

double warping_error(const Image& f1, const Image& f2, const DisplacementField& u,
                     std::span<const std::uint8_t> mask) {
  require(f1.grid() == f2.grid() && f1.grid() == u.grid, "warping_error: grids differ");
  require(mask.empty() || mask.size() == u.grid.size(), "warping_error: mask size differs from the grid");
  const Image predicted = warp_image(f1, u);
  return masked_mean(u.grid.size(), mask, true,
                     [&](std::size_t i) { return std::abs(f2.values()[i] - predicted.values()[i]); });
}

}  // namespace pae
