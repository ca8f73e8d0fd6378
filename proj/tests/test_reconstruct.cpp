#include <cmath>

#include "doctest.h"
#include "pae/bandlimit.hpp"
#include "pae/phantom.hpp"
#include "pae/reconstruct.hpp"

using namespace pae;

namespace {

double interior_error(const Image& a, const Image& ref, double radius) {
  double num = 0.0, den = 0.0;
  for (std::size_t iy = 0; iy < a.height(); ++iy)
    for (std::size_t ix = 0; ix < a.width(); ++ix) {
      const Point p = a.grid().position(ix, iy);
      if (std::hypot(p.x, p.y) > radius) continue;
      const double e = a(ix, iy) - ref(ix, iy);
      num += e * e;
      den += ref(ix, iy) * ref(ix, iy);
    }
  return std::sqrt(num / den);
}

struct Setup {
  Image f;
  SensorGeometry geom;
  SolverConfig cfg;
};

// Centered disc of radius R/4 inside a circle of radius R = 0.47 n dx.
Setup disc_setup(std::size_t n, double dx = 1.0, std::size_t sensors = 128) {
  Setup s;
  const Grid g = Grid::centered(n, n, dx);
  s.geom = {{}, 0.47 * static_cast<double>(n) * dx, sensors};
  PhantomSpec spec;
  spec.grid = g;
  spec.radius = s.geom.radius / 4.0;
  s.f = make_phantom(spec);
  return s;
}

}  // namespace

TEST_CASE("zero data reconstructs to zero") {
  const auto s = disc_setup(48);
  SensorData m(s.geom, 0.5, 200);
  const Image rec = reconstruct_time_reversal(m, s.f.grid(), s.cfg);
  for (double v : rec.values()) CHECK(v == 0.0);
  const Image tex = reconstruct_textured(m, {0.05, 0.5}, s.f.grid(), s.cfg);
  for (double v : tex.values()) CHECK(v == 0.0);
}

TEST_CASE("short records and sparse sensors are rejected") {
  const auto s = disc_setup(64);
  SensorData shortm(s.geom, 0.5, static_cast<std::size_t>(s.geom.radius * 2.0));
  CHECK_THROWS_AS(reconstruct_time_reversal(shortm, s.f.grid(), s.cfg), Error);
  SensorGeometry sparse = s.geom;
  sparse.num_sensors = 16;
  SensorData m(sparse, 0.5, 400);
  CHECK_THROWS_AS(reconstruct_time_reversal(m, s.f.grid(), s.cfg), Error);
  SensorData two_sided(s.geom, 0.5, 401, 200);
  CHECK_THROWS_AS(reconstruct_textured(two_sided, {0.05, 0.5}, s.f.grid(), s.cfg), Error);
}

TEST_CASE("disc round trip and textured reconstruction") {
  const auto s = disc_setup(128);
  const auto m = simulate(s.f, s.geom, s.cfg);
  const Image rec = reconstruct_time_reversal(m, s.f.grid(), s.cfg);
  CHECK(interior_error(rec, s.f, s.geom.radius) <= 0.15);

  const BandSpec band = BandSpec{0.4, 10.0}.scaled(1.0 / s.geom.radius);
  const Image tex = reconstruct_textured(m, band, s.f.grid(), s.cfg);
  CHECK(interior_error(tex, convolve_psf(s.f, band), 0.8 * s.geom.radius) <= 0.10);
  CHECK(interior_error(tex, convolve_psf(rec, band), 0.8 * s.geom.radius) <= 0.05);

  for (std::size_t iy = 0; iy < rec.height(); ++iy)
    for (std::size_t ix = 0; ix < rec.width(); ++ix) {
      const Point p = rec.grid().position(ix, iy);
      if (std::hypot(p.x, p.y) >= s.geom.radius) CHECK(rec(ix, iy) == 0.0);
    }
}

TEST_CASE("textured reconstruction of a point source") {
  auto s = disc_setup(128);
  std::fill(s.f.values().begin(), s.f.values().end(), 0.0);
  s.f(64, 64) = 1.0;
  const auto m = simulate(s.f, s.geom, s.cfg);
  const BandSpec band = BandSpec{1.8, 10.0}.scaled(1.0 / s.geom.radius);
  const Image tex = reconstruct_textured(m, band, s.f.grid(), s.cfg);
  CHECK(interior_error(tex, convolve_psf(s.f, band), 0.8 * s.geom.radius) <= 0.10);
}

TEST_CASE("reconstruction is linear in the data") {
  const auto s = disc_setup(64);
  const auto m = simulate(s.f, s.geom, s.cfg);
  SensorData other = m;
  for (std::size_t i = 0; i < other.values().size(); ++i) other.values()[i] = std::sin(0.01 * i) * 0.1;
  SensorData mix = m;
  for (std::size_t i = 0; i < mix.values().size(); ++i) mix.values()[i] = 3.0 * m.values()[i] - 2.0 * other.values()[i];
  const BandSpec band{0.02, 0.4};
  for (bool textured : {false, true}) {
    auto run = [&](const SensorData& d) {
      return textured ? reconstruct_textured(d, band, s.f.grid(), s.cfg)
                      : reconstruct_time_reversal(d, s.f.grid(), s.cfg);
    };
    const Image a = run(m);
    const Image b = run(other);
    const Image c = run(mix);
    std::vector<double> combo(c.values().size());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 3.0 * a.values()[i] - 2.0 * b.values()[i];
    CHECK(relative_l2(c.values(), combo) < 1e-9);
  }
}

TEST_CASE("round-trip error decreases under grid refinement") {
  double prev = 1e9;
  for (int level = 0; level < 3; ++level) {
    const double dx = 1.0 / (1 << level);
    const auto s = disc_setup(static_cast<std::size_t>(48 << level), dx, 192);
    const auto m = simulate(s.f, s.geom, s.cfg);
    const double err = interior_error(reconstruct_time_reversal(m, s.f.grid(), s.cfg), s.f, s.geom.radius);
    MESSAGE("level " << level << " error " << err);
    CHECK(err < prev);
    prev = err;
  }
}
