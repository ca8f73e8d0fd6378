#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pae/core.hpp"

using namespace pae;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pae_test_core";
  fs::create_directories(dir);
  return dir / name;
}

Image ramp_image(std::size_t w, std::size_t h) {
  Image img(Grid::centered(w, h, 0.5));
  for (std::size_t iy = 0; iy < h; ++iy)
    for (std::size_t ix = 0; ix < w; ++ix) img(ix, iy) = std::sin(0.3 * ix) + 0.1 * iy * iy;
  return img;
}

}  // namespace

TEST_CASE("centered grid puts the origin half a lattice away from zero") {
  const Grid g = Grid::centered(4, 3, 2.0);
  CHECK(g.origin.x == doctest::Approx(-3.0));
  CHECK(g.origin.y == doctest::Approx(-2.0));
  CHECK(g.position(3, 2).x == doctest::Approx(3.0));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::centered(0, 4).validate(), Error);
  Grid g = Grid::centered(4, 4);
  g.dx = -1;
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("bilinear sampling matches the textbook formula") {
  const Image img = ramp_image(9, 7);
  for (double x = -3.0; x <= 3.0; x += 0.37) {
    for (double y = -2.5; y <= 2.5; y += 0.41) {
      CHECK(resample_bilinear(img, {x, y}) == doctest::Approx(oracle::bilinear_textbook(img, {x, y})).epsilon(1e-14));
    }
  }
}

TEST_CASE("bilinear sampling reproduces pixel values and clamps outside") {
  const Image img = ramp_image(5, 5);
  const Point p = img.grid().position(2, 3);
  CHECK(resample_bilinear(img, p) == doctest::Approx(img(2, 3)));
  CHECK(resample_bilinear(img, {100.0, 100.0}) == doctest::Approx(img(4, 4)));
  CHECK(resample_bilinear(img, {-100.0, -100.0}) == doctest::Approx(img(0, 0)));
}

TEST_CASE("sensor geometry layout") {
  SensorGeometry geom{{1.0, 2.0}, 10.0, 4};
  CHECK(geom.sensor(1).x == doctest::Approx(1.0));
  CHECK(geom.sensor(1).y == doctest::Approx(12.0));
  geom.num_sensors = 2;
  CHECK_THROWS_AS(geom.validate(), Error);
}

TEST_CASE("sensor data time axis") {
  SensorData causal({{}, 5.0, 3}, 0.25, 8);
  CHECK(causal.causal());
  CHECK(causal.time(4) == doctest::Approx(1.0));
  SensorData sym({{}, 5.0, 3}, 0.25, 9, 4);
  CHECK(sym.symmetric());
  CHECK(sym.time(0) == doctest::Approx(-1.0));
  sym.trace(1)[5] = 2.0;
  CHECK(sym.sample(1, 0.125) == doctest::Approx(1.0));
  CHECK(sym.sample(1, 10.0) == 0.0);
}

TEST_CASE("band spec") {
  const BandSpec b{0.4, 10.0};
  CHECK(b.contains(-5.0));
  CHECK(b.contains(10.0));
  CHECK_FALSE(b.contains(0.3));
  CHECK_THROWS_AS((BandSpec{2.0, 1.0}).validate(), Error);
  CHECK_THROWS_AS((BandSpec{-1.0, 1.0}).validate(), Error);
  CHECK_NOTHROW((BandSpec{1.0, 1.0}).validate());
}

TEST_CASE("image write/read round trip is bit exact") {
  const Image img = ramp_image(64, 64);
  const auto path = scratch("img.bin");
  write_image(img, path);
  CHECK(fs::exists(sidecar_path(path)));
  const Image back = read_image(path);
  CHECK(back == img);
}

TEST_CASE("sensor data and displacement round trips") {
  SensorData d({{0.5, -0.5}, 20.0, 16}, 0.5, 33, 16);
  for (std::size_t i = 0; i < d.values().size(); ++i) d.values()[i] = std::cos(0.01 * i);
  write_sensor_data(d, scratch("sd.bin"));
  CHECK(read_sensor_data(scratch("sd.bin")) == d);

  DisplacementField u(Grid::centered(8, 6));
  for (std::size_t i = 0; i < u.ux.size(); ++i) {
    u.ux[i] = 0.1 * i;
    u.uy[i] = -0.2 * i;
  }
  write_displacement(u, scratch("u.bin"));
  CHECK(read_displacement(scratch("u.bin")) == u);
}

TEST_CASE("payload size mismatch is an io error") {
  const Image img = ramp_image(8, 8);
  const auto path = scratch("short.bin");
  write_image(img, path);
  fs::resize_file(path, fs::file_size(path) - 8);
  try {
    read_image(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("malformed header and wrong kind are io errors") {
  const Image img = ramp_image(8, 8);
  const auto path = scratch("bad.bin");
  write_image(img, path);
  std::ofstream(sidecar_path(path)) << "{ not json";
  CHECK_THROWS_AS(read_image(path), Error);
  write_image(img, path);
  CHECK_THROWS_AS(read_sensor_data(path), Error);
  CHECK_THROWS_AS(read_image(scratch("missing.bin")), Error);
}

TEST_CASE("relative l2") {
  const std::vector<double> a{1.0, 2.0, 2.0};
  const std::vector<double> b{1.0, 2.0, 3.0};
  CHECK(relative_l2(a, b) == doctest::Approx(1.0 / std::sqrt(14.0)));
  const std::vector<double> z{0.0, 0.0, 0.0};
  CHECK(relative_l2(z, z) == 0.0);
}
