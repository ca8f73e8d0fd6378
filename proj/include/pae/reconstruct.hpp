#pragma once

// Inversion of circular-aperture sensor data by time reversal.

#include "pae/bandlimit.hpp"
#include "pae/core.hpp"
#include "pae/wave.hpp"

namespace pae {

struct ReconstructOptions {
  /// Boundary nodes off the circle read the data delayed by their radial
  /// offset and scaled by sqrt(R / r) (outgoing cylindrical wave).
  bool radial_correction = true;
  /// Start time is where every trace has fallen below this fraction of the
  /// global peak (bounded by the recorded window).
  double tail_threshold = 1e-3;
};

/// Runs the wave equation backward from the end of the record to t = 0 with
/// the measured traces (interpolated in angle) imposed as Dirichlet values on
/// the lattice nodes just outside the sensor circle. Only t >= 0 samples are
/// used. The result is zero outside the circle.
Image reconstruct_time_reversal(const SensorData& m, const Grid& grid, const SolverConfig& cfg,
                                const ReconstructOptions& opts = {});

/// apply_bandpass -> make_even -> t >= 0 restriction -> time reversal; the
/// result approximates convolve_psf(f, band).
Image reconstruct_textured(const SensorData& m, const BandSpec& band, const Grid& grid,
                           const SolverConfig& cfg, const ReconstructOptions& opts = {});

/// Causal copy of the t >= 0 part of any trace window.
SensorData restrict_nonnegative(const SensorData& m);

}  // namespace pae
