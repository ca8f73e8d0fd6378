#include "wave_grid.hpp"

#include <algorithm>
#include <cmath>

namespace pae::detail {

Lattice make_lattice(const Grid& image, const SensorGeometry& geom, double margin,
                     std::size_t extra_cells) {
  const double dx = image.dx;
  const double reach = geom.radius + margin;
  const double xmin = std::min(image.origin.x, geom.center.x - reach);
  const double ymin = std::min(image.origin.y, geom.center.y - reach);
  const double xmax = std::max(image.origin.x + dx * static_cast<double>(image.width - 1), geom.center.x + reach);
  const double ymax = std::max(image.origin.y + dx * static_cast<double>(image.height - 1), geom.center.y + reach);
  const auto extra = static_cast<std::ptrdiff_t>(extra_cells);
  const auto ix0 = static_cast<std::ptrdiff_t>(std::floor((xmin - image.origin.x) / dx)) - extra;
  const auto iy0 = static_cast<std::ptrdiff_t>(std::floor((ymin - image.origin.y) / dx)) - extra;
  const auto ix1 = static_cast<std::ptrdiff_t>(std::ceil((xmax - image.origin.x) / dx)) + extra;
  const auto iy1 = static_cast<std::ptrdiff_t>(std::ceil((ymax - image.origin.y) / dx)) + extra;
  Lattice lat;
  lat.dx = dx;
  lat.nx = static_cast<std::size_t>(ix1 - ix0 + 1);
  lat.ny = static_cast<std::size_t>(iy1 - iy0 + 1);
  lat.origin = {image.origin.x + dx * static_cast<double>(ix0), image.origin.y + dx * static_cast<double>(iy0)};
  lat.image_x = -ix0;
  lat.image_y = -iy0;
  return lat;
}

void load_image(const Lattice& lat, const Image& f, std::vector<double>& field) {
  field.assign(lat.size(), 0.0);
  for (std::size_t iy = 0; iy < f.height(); ++iy) {
    const auto ly = static_cast<std::size_t>(lat.image_y + static_cast<std::ptrdiff_t>(iy));
    for (std::size_t ix = 0; ix < f.width(); ++ix) {
      const auto lx = static_cast<std::size_t>(lat.image_x + static_cast<std::ptrdiff_t>(ix));
      field[ly * lat.nx + lx] = f(ix, iy);
    }
  }
}

Image extract_image(const Lattice& lat, const std::vector<double>& field, const Grid& g,
                    std::size_t stride) {
  Image out(g);
  const auto q = static_cast<std::ptrdiff_t>(stride);
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    const auto ly = static_cast<std::size_t>(lat.image_y + q * static_cast<std::ptrdiff_t>(iy));
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const auto lx = static_cast<std::size_t>(lat.image_x + q * static_cast<std::ptrdiff_t>(ix));
      out(ix, iy) = field[ly * lat.nx + lx];
    }
  }
  return out;
}

Grid refined_grid(const Grid& g, std::size_t factor) {
  Grid fine = g;
  fine.width = (g.width - 1) * factor + 1;
  fine.height = (g.height - 1) * factor + 1;
  fine.dx = g.dx / static_cast<double>(factor);
  return fine;
}

namespace {

// Keys cubic convolution kernel (a = -1/2), support |x| < 2.
double keys(double x) {
  x = std::abs(x);
  if (x < 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

}  // namespace

Image upsample_cubic(const Image& f, std::size_t factor) {
  if (factor == 1) return f;
  const Grid& g = f.grid();
  const Grid fg = refined_grid(g, factor);
  const auto q = static_cast<std::ptrdiff_t>(factor);
  // Separable weights: fine offset r in [0, factor) -> taps at coarse j-1 .. j+2.
  std::vector<std::array<double, 4>> w(factor);
  for (std::size_t r = 0; r < factor; ++r) {
    const double t = static_cast<double>(r) / static_cast<double>(factor);
    w[r] = {keys(t + 1.0), keys(t), keys(1.0 - t), keys(2.0 - t)};
  }
  auto at = [&](std::ptrdiff_t ix, std::ptrdiff_t iy) {
    if (ix < 0 || iy < 0 || ix >= static_cast<std::ptrdiff_t>(g.width) || iy >= static_cast<std::ptrdiff_t>(g.height))
      return 0.0;
    return f(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
  };
  // Rows first on the coarse row set, then columns.
  Image rows(Grid{fg.width, g.height, fg.dx, g.origin});
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t fx = 0; fx < fg.width; ++fx) {
      const auto j = static_cast<std::ptrdiff_t>(fx) / q;
      const auto& wr = w[fx % factor];
      double v = 0.0;
      for (std::ptrdiff_t k = 0; k < 4; ++k) v += wr[k] * at(j - 1 + k, static_cast<std::ptrdiff_t>(iy));
      rows(fx, iy) = v;
    }
  }
  Image out(fg);
  for (std::size_t fy = 0; fy < fg.height; ++fy) {
    const auto j = static_cast<std::ptrdiff_t>(fy) / q;
    const auto& wr = w[fy % factor];
    for (std::size_t fx = 0; fx < fg.width; ++fx) {
      double v = 0.0;
      for (std::ptrdiff_t k = 0; k < 4; ++k) {
        const std::ptrdiff_t iy = j - 1 + k;
        if (iy >= 0 && iy < static_cast<std::ptrdiff_t>(g.height)) v += wr[k] * rows(fx, static_cast<std::size_t>(iy));
      }
      out(fx, fy) = v;
    }
  }
  return out;
}

Bilinear bilinear_stencil(const Lattice& lat, Point p) {
  const double fx = (p.x - lat.origin.x) / lat.dx;
  const double fy = (p.y - lat.origin.y) / lat.dx;
  require(fx >= 0.0 && fy >= 0.0 && fx <= static_cast<double>(lat.nx - 2) &&
              fy <= static_cast<double>(lat.ny - 2),
          "sample point lies outside the computational lattice");
  const auto x0 = static_cast<std::size_t>(std::floor(fx));
  const auto y0 = static_cast<std::size_t>(std::floor(fy));
  const double tx = fx - static_cast<double>(x0);
  const double ty = fy - static_cast<double>(y0);
  Bilinear b;
  b.index = {y0 * lat.nx + x0, y0 * lat.nx + x0 + 1, (y0 + 1) * lat.nx + x0, (y0 + 1) * lat.nx + x0 + 1};
  b.weight = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  return b;
}

void leapfrog(const Lattice& lat, double c2, const std::vector<double>& prev,
              const std::vector<double>& cur, std::vector<double>& next) {
  const std::size_t nx = lat.nx;
  for (std::size_t iy = 1; iy + 1 < lat.ny; ++iy) {
    const std::size_t row = iy * nx;
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
      const std::size_t i = row + ix;
      const double lap = cur[i - 1] + cur[i + 1] + cur[i - nx] + cur[i + nx] - 4.0 * cur[i];
      next[i] = 2.0 * cur[i] - prev[i] + c2 * lap;
    }
  }
}

}  // namespace pae::detail
