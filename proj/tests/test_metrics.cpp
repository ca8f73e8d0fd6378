#include <cmath>
#include <random>

#include "doctest.h"
#include "pae/metrics.hpp"
#include "pae/phantom.hpp"

using namespace pae;

namespace {

DisplacementField uniform(const Grid& g, double x, double y) {
  DisplacementField u(g);
  std::fill(u.ux.begin(), u.ux.end(), x);
  std::fill(u.uy.begin(), u.uy.end(), y);
  return u;
}

DisplacementField random_field(const Grid& g, unsigned seed) {
  DisplacementField u(g);
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  for (auto& v : u.ux) v = nd(gen);
  for (auto& v : u.uy) v = nd(gen);
  return u;
}

}  // namespace

TEST_CASE("identical fields give zero error") {
  const Grid g = Grid::centered(16, 16);
  const auto u = random_field(g, 1);
  const auto mask = magnitude_mask(u);
  CHECK(aae(u, u, mask) == 0.0);
  CHECK(aee(u, u) == 0.0);
  CHECK(aee_rel(u, u, mask) == 0.0);
}

TEST_CASE("orthogonal and offset uniform fields") {
  const Grid g = Grid::centered(16, 16);
  const auto u0 = uniform(g, 1.0, 0.0);
  const auto mask = magnitude_mask(u0);
  CHECK(aae(uniform(g, 0.0, 1.0), u0, mask) == doctest::Approx(kPi / 2));
  const auto u = uniform(g, 1.1, 0.0);
  CHECK(aee(u, u0) == doctest::Approx(0.1));
  CHECK(aee_rel(u, u0, mask) == doctest::Approx(0.1));
}

TEST_CASE("metrics against per-pixel sums") {
  const Grid g = Grid::centered(16, 16);
  const auto u = random_field(g, 2);
  const auto u0 = random_field(g, 3);
  const auto mask = magnitude_mask(u0);
  double sa = 0.0, se = 0.0, sr = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = std::hypot(u.ux[i] - u0.ux[i], u.uy[i] - u0.uy[i]);
    se += e;
    if (!mask[i]) continue;
    double d = std::abs(std::atan2(u.uy[i], u.ux[i]) - std::atan2(u0.uy[i], u0.ux[i]));
    if (d > kPi) d = 2 * kPi - d;
    sa += d;
    sr += e / std::hypot(u0.ux[i], u0.uy[i]);
    ++n;
  }
  CHECK(aae(u, u0, mask) == doctest::Approx(sa / n).epsilon(1e-12));
  CHECK(aee(u, u0) == doctest::Approx(se / g.size()).epsilon(1e-12));
  CHECK(aee_rel(u, u0, mask) == doctest::Approx(sr / n).epsilon(1e-12));
}

TEST_CASE("angle error is scale invariant and aee obeys the triangle bound") {
  const Grid g = Grid::centered(16, 16);
  for (unsigned seed = 0; seed < 20; ++seed) {
    auto u = random_field(g, 10 + seed);
    auto v = random_field(g, 40 + seed);
    auto w = random_field(g, 70 + seed);
    const auto mask = magnitude_mask(v);
    auto cu = u;
    auto cv = v;
    for (auto* f : {&cu, &cv}) {
      for (auto& x : f->ux) x *= 4.0;
      for (auto& x : f->uy) x *= 4.0;
    }
    // Power-of-two scaling is exact in floating point, so atan2 sees the same ratios.
    CHECK(aae(cu, cv, mask) == aae(u, v, mask));
    CHECK(aee(u, w) <= aee(u, v) + aee(v, w) + 1e-15);
    CHECK(aae(u, v, mask) >= 0.0);
  }
}

TEST_CASE("empty mask is rejected") {
  const Grid g = Grid::centered(8, 8);
  const auto zero = uniform(g, 0.0, 0.0);
  const auto mask = magnitude_mask(zero);
  CHECK_THROWS_AS(aae(zero, zero, mask), Error);
  CHECK_THROWS_AS(aee_rel(zero, zero, mask), Error);
}

TEST_CASE("warping error") {
  Image f(Grid::centered(32, 32));
  for (std::size_t iy = 0; iy < 32; ++iy)
    for (std::size_t ix = 0; ix < 32; ++ix) f(ix, iy) = std::sin(0.4 * ix) * std::cos(0.3 * iy);
  CHECK(warping_error(f, f, DisplacementField(f.grid())) == 0.0);

  const auto shift = uniform(f.grid(), 1.0, -2.0);
  CHECK(warping_error(f, warp_image(f, shift), shift) == 0.0);

  DeformationSpec d;
  d.kind = DeformationKind::nonrigid_bump;
  d.bump_amplitude = 1.3;
  d.bump_sigma = 6.0;
  const auto u0 = make_displacement(d, f.grid());
  CHECK(warping_error(f, warp_image(f, u0), u0) <= 1e-10);
  CHECK_THROWS_AS(warping_error(f, Image(Grid::centered(8, 8)), u0), Error);
}
