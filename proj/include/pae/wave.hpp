#pragma once

// Forward operator: the 2D homogeneous wave initial-value problem
//   p_tt - Laplace(p) = 0,  p(0) = f,  p_t(0) = 0
// traced on a circle of sensors.

#include <functional>
#include <span>
#include <vector>

#include "pae/core.hpp"

namespace pae {

struct SolverConfig {
  /// dt = cfl * dx; stability of the five-point leapfrog needs cfl <= 1/sqrt(2).
  double cfl = 0.5;
  /// The solver lattice is this many times finer than the image grid (the
  /// image is carried over by cubic convolution). Traces are still reported
  /// every cfl * dx of the image grid.
  std::size_t oversampling = 2;
  /// Free space added around the sensor circle, as a fraction of its radius.
  double padding_factor = 0.5;
  /// Width of the multiplicative damping layer at the outer boundary.
  std::size_t sponge_cells = 40;
  /// Per-step damping exponent at the outermost sponge cell.
  double sponge_strength = 0.08;
  /// Total simulated time; 0 selects 4 * radius (the diameter plus room for
  /// band-pass filter tails).
  double total_time = 0.0;
  /// Grow the padding to at least T/2 so that nothing reflected at the outer
  /// boundary reaches the sensor circle within the simulated time.
  bool reflection_free = true;
  /// Reject sources with nonzero values outside the sensor circle.
  bool check_support = true;

  double resolved_time(const SensorGeometry& geom) const {
    return total_time > 0.0 ? total_time : 4.0 * geom.radius;
  }
  void validate(const SensorGeometry& geom) const;
};

/// Causal sensor traces of the wave started from f; sample n is t = n * cfl * dx.
SensorData simulate(const Image& f, const SensorGeometry& geom, const SolverConfig& cfg);

using ScalarField = std::function<double(double x, double y)>;

struct OracleOptions {
  double tolerance = 1e-10;
  int max_refinements = 8;
  double derivative_step = 0.02;
};

/// Reference trace at point x from the 2D solution formula
///   p(x, t) = d/dt (1/2pi) int_{|y-x|<t} f(y) / sqrt(t^2 - |y-x|^2) dy,
/// by refined polar quadrature and a fourth-order central difference in t.
std::vector<double> wave_trace_oracle(const ScalarField& f, Point x, std::span<const double> t_samples,
                                      const OracleOptions& opts = {});
/// Same, with f given by bilinear interpolation of an image.
std::vector<double> wave_trace_oracle(const Image& f, Point x, std::span<const double> t_samples,
                                      const OracleOptions& opts = {});

}  // namespace pae
