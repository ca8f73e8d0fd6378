#pragma once

// Computational lattice shared by the forward solver and time reversal. It is
// aligned with the image lattice so image pixels map to grid nodes exactly.

#include <array>
#include <cstddef>
#include <vector>

#include "pae/core.hpp"

namespace pae::detail {

struct Lattice {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 1.0;
  Point origin{};
  std::ptrdiff_t image_x = 0;  // lattice index of image pixel (0, 0)
  std::ptrdiff_t image_y = 0;

  std::size_t size() const { return nx * ny; }
  Point position(std::size_t ix, std::size_t iy) const {
    return {origin.x + dx * static_cast<double>(ix), origin.y + dx * static_cast<double>(iy)};
  }
};

/// Lattice covering the image and the sensor circle grown by `margin`, plus
/// `extra_cells` on every side.
Lattice make_lattice(const Grid& image, const SensorGeometry& geom, double margin,
                     std::size_t extra_cells);

void load_image(const Lattice& lat, const Image& f, std::vector<double>& field);
/// Reads the image pixels back from a lattice that is `stride` times finer.
Image extract_image(const Lattice& lat, const std::vector<double>& field, const Grid& g,
                    std::size_t stride = 1);

/// Grid with spacing dx / factor whose every factor-th node is a node of g.
Grid refined_grid(const Grid& g, std::size_t factor);
/// Keys cubic convolution onto refined_grid; zero outside the image, so the
/// support grows by at most two image pixels.
Image upsample_cubic(const Image& f, std::size_t factor);

/// Four-node bilinear stencil for an off-grid point.
struct Bilinear {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  double apply(const std::vector<double>& field) const {
    return weight[0] * field[index[0]] + weight[1] * field[index[1]] + weight[2] * field[index[2]] +
           weight[3] * field[index[3]];
  }
};
Bilinear bilinear_stencil(const Lattice& lat, Point p);

/// One leapfrog step next = 2 cur - prev + c2 * Laplace(cur) on nodes away
/// from the outermost frame (which stays zero). `next` may alias `prev`.
void leapfrog(const Lattice& lat, double c2, const std::vector<double>& prev,
              const std::vector<double>& cur, std::vector<double>& next);

}  // namespace pae::detail
