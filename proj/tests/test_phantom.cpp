#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pae/phantom.hpp"

using namespace pae;

namespace {

PhantomSpec disc_spec(double radius) {
  PhantomSpec s;
  s.kind = PhantomKind::disc;
  s.grid = Grid::centered(64, 64);
  s.radius = radius;
  return s;
}

double total(const Image& img) {
  double t = 0.0;
  for (double v : img.values()) t += v;
  return t;
}

Image smooth_image(std::size_t n) {
  Image f(Grid::centered(n, n));
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Point p = f.grid().position(ix, iy);
      f(ix, iy) = std::exp(-(p.x * p.x + p.y * p.y) / 200.0) * std::cos(0.1 * p.x);
    }
  return f;
}

}  // namespace

TEST_CASE("disc pixel count") {
  const auto spec = disc_spec(10.0);
  const Image f = make_phantom(spec);
  const double count = total(f);
  CHECK(std::abs(count - kPi * 100.0) < 0.03 * kPi * 100.0);
  CHECK(count == static_cast<double>(oracle::disc_pixel_count(spec.grid, spec.center, 10.0)));
  CHECK(total(make_phantom(disc_spec(0.0))) == 0.0);
}

TEST_CASE("annulus is the difference of two discs") {
  auto spec = disc_spec(12.0);
  spec.kind = PhantomKind::annulus;
  spec.inner_radius = 5.0;
  const double expected = static_cast<double>(oracle::disc_pixel_count(spec.grid, spec.center, 12.0) -
                                              oracle::disc_pixel_count(spec.grid, spec.center, 5.0));
  CHECK(total(make_phantom(spec)) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("tree of depth 0 is the trunk rectangle") {
  PhantomSpec s;
  s.kind = PhantomKind::branching_tree;
  s.grid = Grid::centered(128, 128);
  s.center = {0.0, -20.0};
  s.depth = 0;
  s.trunk_length = 30.0;
  s.trunk_width = 6.0;
  s.jitter = 0.0;
  const double area = total(make_phantom(s));
  CHECK(std::abs(area - 180.0) <= 30.0 + 6.0 + 4.0);
}

TEST_CASE("tree phantom is deterministic and piecewise constant") {
  PhantomSpec s;
  s.kind = PhantomKind::branching_tree;
  s.grid = Grid::centered(128, 128);
  s.center = {0.0, -40.0};
  s.depth = 4;
  s.trunk_length = 30.0;
  s.trunk_width = 7.0;
  s.seed = 42;
  const Image a = make_phantom(s);
  CHECK(a == make_phantom(s));
  for (double v : a.values()) CHECK((v == 0.0 || v == 1.0));
  s.seed = 43;
  CHECK_FALSE(a == make_phantom(s));
}

TEST_CASE("phantom must keep a margin to the sensor circle") {
  auto spec = disc_spec(20.0);
  spec.enclosing = SensorGeometry{{}, 21.0, 64};
  CHECK_THROWS_AS(make_phantom(spec), Error);
  spec.enclosing = SensorGeometry{{}, 30.0, 64};
  CHECK_NOTHROW(make_phantom(spec));
}

TEST_CASE("translation field") {
  DeformationSpec d;
  d.shift = {1.5, -0.5};
  const auto u = make_displacement(d, Grid::centered(16, 16));
  for (std::size_t i = 0; i < u.ux.size(); ++i) {
    CHECK(u.ux[i] == 1.5);
    CHECK(u.uy[i] == -0.5);
  }
  d.shift = {6.0, 0.0};
  CHECK_THROWS_AS(make_displacement(d, Grid::centered(16, 16)), Error);
}

TEST_CASE("rotation field chord length") {
  DeformationSpec d;
  d.kind = DeformationKind::rigid_rotation;
  d.angle = 0.05;
  d.pivot = {2.0, -1.0};
  const Grid g = Grid::centered(64, 64);
  const auto u = make_displacement(d, g);
  for (std::size_t iy = 0; iy < g.height; ++iy)
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const Point p = g.position(ix, iy);
      const std::size_t i = iy * g.width + ix;
      const double r = std::hypot(p.x - d.pivot.x, p.y - d.pivot.y);
      CHECK(std::hypot(u.ux[i], u.uy[i]) == doctest::Approx(2 * std::sin(0.025) * r).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("bump field") {
  DeformationSpec d;
  d.kind = DeformationKind::nonrigid_bump;
  d.bump_amplitude = 2.0;
  d.bump_sigma = 8.0;
  d.bump_direction = 0.7;
  d.bump_center = {0.5, 0.5};  // a pixel center of the 64 x 64 centered grid
  const Grid g = Grid::centered(64, 64);
  const auto u = make_displacement(d, g);
  const std::size_t c = 32 * 64 + 32;
  CHECK(u.ux[c] == doctest::Approx(2.0 * std::cos(0.7)));
  CHECK(u.uy[c] == doctest::Approx(2.0 * std::sin(0.7)));
  for (std::size_t iy = 0; iy < g.height; ++iy)
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const Point p = g.position(ix, iy);
      if (std::hypot(p.x - 0.5, p.y - 0.5) >= 32.0) {
        CHECK(std::hypot(u.ux[iy * 64 + ix], u.uy[iy * 64 + ix]) < 0.02);
      }
    }
}

TEST_CASE("warp identities") {
  const Image f = smooth_image(48);
  CHECK(warp_image(f, DisplacementField(f.grid())) == f);

  DisplacementField shift(f.grid());
  std::fill(shift.ux.begin(), shift.ux.end(), 2.0);
  const Image g = warp_image(f, shift);
  for (std::size_t iy = 0; iy < 48; ++iy)
    for (std::size_t ix = 0; ix + 2 < 48; ++ix) CHECK(g(ix, iy) == f(ix + 2, iy));

  Image ramp(Grid::centered(16, 16));
  for (std::size_t iy = 0; iy < 16; ++iy)
    for (std::size_t ix = 0; ix < 16; ++ix) ramp(ix, iy) = 3.0 * ix - 2.0 * iy;
  DisplacementField half(ramp.grid());
  std::fill(half.ux.begin(), half.ux.end(), 0.5);
  std::fill(half.uy.begin(), half.uy.end(), 0.5);
  const Image r2 = warp_image(ramp, half);
  for (std::size_t iy = 0; iy < 15; ++iy)
    for (std::size_t ix = 0; ix < 15; ++ix) CHECK(r2(ix, iy) == doctest::Approx(ramp(ix, iy) + 0.5));

  CHECK_THROWS_AS(warp_image(f, DisplacementField(Grid::centered(8, 8))), Error);
}

TEST_CASE("warp semigroup for translations") {
  const Image f = smooth_image(64);
  DisplacementField full(f.grid()), half(f.grid());
  std::fill(full.ux.begin(), full.ux.end(), 1.4);
  std::fill(full.uy.begin(), full.uy.end(), -0.6);
  std::fill(half.ux.begin(), half.ux.end(), 0.7);
  std::fill(half.uy.begin(), half.uy.end(), -0.3);
  const Image twice = warp_image(warp_image(f, half), half);
  CHECK(relative_l2(twice.values(), warp_image(f, full).values()) < 0.02);
}

TEST_CASE("gaussian texture statistics") {
  const Image f(Grid::centered(256, 256), 1.0);
  CHECK(add_gaussian_texture(f, 0.0, 3) == f);
  const Image a = add_gaussian_texture(f, 0.3, 3);
  CHECK(a == add_gaussian_texture(f, 0.3, 3));
  double mean = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    const double d = a.values()[i] - f.values()[i];
    mean += d;
    sq += d * d;
  }
  const double n = static_cast<double>(f.values().size());
  mean /= n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(var - 0.09) < 0.05 * 0.09);
  CHECK_THROWS_AS(add_gaussian_texture(f, -1.0, 3), Error);
}

TEST_CASE("support mask") {
  const Image f = make_phantom(disc_spec(5.0));
  const Image m = support_mask(f);
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(m.values()[i] == (f.values()[i] != 0.0 ? 1.0 : 0.0));
}
