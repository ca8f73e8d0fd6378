#include "pae/phantom.hpp"

#include <cmath>
#include <sstream>

#include "rng.hpp"

namespace pae {
namespace {

struct Segment {
  Point start;
  double angle;
  double length;
  double width;
};

void grow(std::vector<Segment>& out, const Segment& s, int levels, const PhantomSpec& spec,
          detail::Rng& rng) {
  out.push_back(s);
  if (levels <= 0) return;
  const Point end{s.start.x + s.length * std::cos(s.angle), s.start.y + s.length * std::sin(s.angle)};
  for (double side : {-1.0, 1.0}) {
    const double turn = spec.branch_angle * (1.0 + spec.jitter * rng.uniform(-1.0, 1.0));
    const double len = s.length * spec.length_ratio * (1.0 + spec.jitter * rng.uniform(-1.0, 1.0));
    grow(out, {end, s.angle + side * turn, len, s.width * spec.width_ratio}, levels - 1, spec, rng);
  }
}

bool inside_segment(const Segment& s, Point p, bool round_start) {
  const double dx = p.x - s.start.x;
  const double dy = p.y - s.start.y;
  const double along = dx * std::cos(s.angle) + dy * std::sin(s.angle);
  const double across = -dx * std::sin(s.angle) + dy * std::cos(s.angle);
  const double hw = 0.5 * s.width;
  if (along >= 0.0 && along <= s.length && std::abs(across) <= hw) return true;
  return round_start && dx * dx + dy * dy <= hw * hw;
}

void check_enclosed(const Image& img, const PhantomSpec& spec) {
  if (!spec.enclosing) return;
  const auto& geo = *spec.enclosing;
  const double limit = 0.9 * geo.radius;
  const Grid& g = img.grid();
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      if (img(ix, iy) == 0.0) continue;
      const Point p = g.position(ix, iy);
      if (std::hypot(p.x - geo.center.x, p.y - geo.center.y) > limit) {
        std::ostringstream os;
        os << "phantom support reaches (" << p.x << ", " << p.y
           << "), outside 90% of the sensor radius " << geo.radius;
        fail(ErrorKind::invalid_argument, os.str());
      }
    }
  }
}

}  // namespace

Image make_phantom(const PhantomSpec& spec) {
  spec.grid.validate();
  require(std::isfinite(spec.amplitude), "phantom amplitude must be finite");
  Image img(spec.grid);
  const Grid& g = spec.grid;

  switch (spec.kind) {
    case PhantomKind::disc:
    case PhantomKind::annulus: {
      require(spec.radius >= 0.0, "phantom radius must be nonnegative");
      const double inner = spec.kind == PhantomKind::annulus ? spec.inner_radius : -1.0;
      require(spec.kind == PhantomKind::disc || (inner >= 0.0 && inner <= spec.radius),
              "annulus needs 0 <= inner_radius <= radius");
      for (std::size_t iy = 0; iy < g.height; ++iy) {
        for (std::size_t ix = 0; ix < g.width; ++ix) {
          const Point p = g.position(ix, iy);
          const double r = std::hypot(p.x - spec.center.x, p.y - spec.center.y);
          if (spec.radius > 0.0 && r <= spec.radius && r >= inner) img(ix, iy) = spec.amplitude;
        }
      }
      break;
    }
    case PhantomKind::branching_tree: {
      require(spec.depth >= 0 && spec.depth <= 12, "tree depth must be in [0, 12]");
      require(spec.trunk_length >= 0.0 && spec.trunk_width >= 0.0, "tree sizes must be nonnegative");
      require(spec.length_ratio > 0.0 && spec.width_ratio > 0.0, "tree ratios must be positive");
      if (spec.trunk_length == 0.0 || spec.trunk_width == 0.0) break;
      detail::Rng rng(spec.seed);
      std::vector<Segment> segments;
      grow(segments, {spec.center, spec.direction, spec.trunk_length, spec.trunk_width}, spec.depth,
           spec, rng);
      for (std::size_t iy = 0; iy < g.height; ++iy) {
        for (std::size_t ix = 0; ix < g.width; ++ix) {
          const Point p = g.position(ix, iy);
          for (std::size_t k = 0; k < segments.size(); ++k) {
            if (inside_segment(segments[k], p, k > 0)) {
              img(ix, iy) = spec.amplitude;
              break;
            }
          }
        }
      }
      break;
    }
  }
  check_enclosed(img, spec);
  return img;
}

DisplacementField make_displacement(const DeformationSpec& spec, const Grid& grid) {
  grid.validate();
  DisplacementField u(grid);
  for (std::size_t iy = 0; iy < grid.height; ++iy) {
    for (std::size_t ix = 0; ix < grid.width; ++ix) {
      const std::size_t i = iy * grid.width + ix;
      const Point p = grid.position(ix, iy);
      switch (spec.kind) {
        case DeformationKind::rigid_translation:
          u.ux[i] = spec.shift.x;
          u.uy[i] = spec.shift.y;
          break;
        case DeformationKind::rigid_rotation: {
          const double rx = p.x - spec.pivot.x;
          const double ry = p.y - spec.pivot.y;
          const double c = std::cos(spec.angle);
          const double s = std::sin(spec.angle);
          u.ux[i] = c * rx - s * ry - rx;
          u.uy[i] = s * rx + c * ry - ry;
          break;
        }
        case DeformationKind::nonrigid_bump: {
          require(spec.bump_sigma > 0.0, "bump sigma must be positive");
          const double rx = p.x - spec.bump_center.x;
          const double ry = p.y - spec.bump_center.y;
          const double w =
              spec.bump_amplitude * std::exp(-(rx * rx + ry * ry) / (2.0 * spec.bump_sigma * spec.bump_sigma));
          u.ux[i] = w * std::cos(spec.bump_direction);
          u.uy[i] = w * std::sin(spec.bump_direction);
          break;
        }
      }
    }
  }
  const double limit = DeformationSpec::kMaxPixels * grid.dx;
  const double peak = u.max_magnitude();
  if (!std::isfinite(peak) || peak > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "displacement magnitude " << peak << " exceeds the " << DeformationSpec::kMaxPixels
       << " pixel limit";
    fail(ErrorKind::invalid_argument, os.str());
  }
  return u;
}

Image warp_image(const Image& f1, const DisplacementField& u) {
  require(f1.grid() == u.grid, "warp_image: image and displacement grids differ");
  const Grid& g = f1.grid();
  Image out(g);
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const std::size_t i = iy * g.width + ix;
      const Point p = g.position(ix, iy);
      out(ix, iy) = resample_bilinear(f1, {p.x + u.ux[i], p.y + u.uy[i]});
    }
  }
  return out;
}

Image add_gaussian_texture(const Image& f, double alpha, std::uint64_t seed) {
  require(std::isfinite(alpha) && alpha >= 0.0, "texture alpha must be nonnegative");
  Image out = f;
  if (alpha == 0.0) return out;
  detail::Rng rng(seed);
  for (double& v : out.values()) v += alpha * rng.normal();
  return out;
}

Image support_mask(const Image& f) {
  Image m(f.grid());
  for (std::size_t i = 0; i < f.values().size(); ++i) m.values()[i] = f.values()[i] != 0.0 ? 1.0 : 0.0;
  return m;
}

}  // namespace pae
