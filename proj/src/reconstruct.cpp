#include "pae/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wave_grid.hpp"

namespace pae {
namespace {

struct BoundaryNode {
  std::size_t index;
  std::size_t sensor0;
  std::size_t sensor1;
  double weight1;  // angular interpolation weight of sensor1
  double delay;
  double gain;
};

struct RowSpan {
  std::size_t row;
  std::size_t begin;
  std::size_t end;  // exclusive
};

double start_time(const SensorData& m, double tail_threshold) {
  double peak = 0.0;
  for (double v : m.values()) peak = std::max(peak, std::abs(v));
  const double t_end = m.time(m.num_steps() - 1);
  if (peak == 0.0 || tail_threshold <= 0.0) return t_end;
  std::size_t last = 0;
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    const auto tr = m.trace(s);
    for (std::size_t n = tr.size(); n-- > 0;) {
      if (std::abs(tr[n]) >= tail_threshold * peak) {
        last = std::max(last, n);
        break;
      }
    }
  }
  // keep a short quiet stretch after the last significant sample
  const std::size_t guard = static_cast<std::size_t>(std::ceil(0.1 * m.geometry().radius / m.dt()));
  return std::min(t_end, m.time(std::min(last + guard, m.num_steps() - 1)));
}

}  // namespace

SensorData restrict_nonnegative(const SensorData& m) {
  const std::size_t first = m.time_origin();
  SensorData out(m.geometry(), m.dt(), m.num_steps() - first, 0);
  for (std::size_t s = 0; s < m.num_sensors(); ++s) {
    const auto src = m.trace(s);
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(first), src.end(), out.trace(s).begin());
  }
  return out;
}

Image reconstruct_time_reversal(const SensorData& m, const Grid& grid, const SolverConfig& cfg,
                                const ReconstructOptions& opts) {
  grid.validate();
  const SensorGeometry& geom = m.geometry();
  cfg.validate(geom);
  const double dx = grid.dx;
  const double R = geom.radius;

  const double t_record = m.time(m.num_steps() - 1);
  if (t_record < 2.0 * R) {
    std::ostringstream os;
    os << "record length " << t_record << " is shorter than the sensor diameter " << 2.0 * R;
    fail(ErrorKind::invalid_argument, os.str());
  }
  const double min_sensors = kPi * R / (2.0 * dx);
  if (static_cast<double>(geom.num_sensors) < min_sensors) {
    std::ostringstream os;
    os << geom.num_sensors << " sensors are too sparse for radius " << R << " (need at least "
       << std::ceil(min_sensors) << ", one per 4 grid cells of arc)";
    fail(ErrorKind::invalid_argument, os.str());
  }

  const std::size_t q = cfg.oversampling;
  const double h = dx / static_cast<double>(q);
  const auto lat = detail::make_lattice(detail::refined_grid(grid, q), geom, 3.0 * h, 1);
  std::vector<RowSpan> spans;
  std::vector<BoundaryNode> boundary;
  std::vector<unsigned char> interior(lat.size(), 0);
  const double step = 2.0 * kPi / static_cast<double>(geom.num_sensors);
  for (std::size_t iy = 1; iy + 1 < lat.ny; ++iy) {
    RowSpan span{iy, 0, 0};
    for (std::size_t ix = 1; ix + 1 < lat.nx; ++ix) {
      const Point p = lat.position(ix, iy);
      const double rx = p.x - geom.center.x;
      const double ry = p.y - geom.center.y;
      const double r = std::hypot(rx, ry);
      const std::size_t i = iy * lat.nx + ix;
      if (r < R) {
        interior[i] = 1;
        if (span.end == 0) span.begin = ix;
        span.end = ix + 1;
      } else if (r < R + 1.5 * h) {
        double angle = std::atan2(ry, rx);
        if (angle < 0.0) angle += 2.0 * kPi;
        const double pos = angle / step;
        const auto k0 = static_cast<std::size_t>(std::floor(pos)) % geom.num_sensors;
        BoundaryNode b;
        b.index = i;
        b.sensor0 = k0;
        b.sensor1 = (k0 + 1) % geom.num_sensors;
        b.weight1 = pos - std::floor(pos);
        b.delay = opts.radial_correction ? r - R : 0.0;
        b.gain = opts.radial_correction ? std::sqrt(R / r) : 1.0;
        boundary.push_back(b);
      }
    }
    if (span.end > 0) spans.push_back(span);
  }

  const double dt = cfg.cfl * h;
  const double c2 = cfg.cfl * cfg.cfl;
  const double t0 = start_time(m, opts.tail_threshold);
  const auto n_end = static_cast<std::size_t>(std::floor(t0 / dt + 1e-9));

  std::vector<double> next(lat.size(), 0.0);  // level n + 1
  std::vector<double> cur(lat.size(), 0.0);   // level n
  auto impose = [&](std::vector<double>& field, std::size_t n) {
    const double t = static_cast<double>(n) * dt;
    for (const auto& b : boundary) {
      const double tb = t - b.delay;
      const double v = (1.0 - b.weight1) * m.sample(b.sensor0, tb) + b.weight1 * m.sample(b.sensor1, tb);
      field[b.index] = b.gain * v;
    }
  };
  impose(next, n_end + 1);
  impose(cur, n_end);
  const std::size_t nx = lat.nx;
  for (std::size_t n = n_end; n-- > 0;) {
    // cur holds level n + 1, next holds level n + 2 and is overwritten with level n
    for (const auto& sp : spans) {
      const std::size_t row = sp.row * nx;
      for (std::size_t ix = sp.begin; ix < sp.end; ++ix) {
        const std::size_t i = row + ix;
        if (!interior[i]) continue;
        const double lap = cur[i - 1] + cur[i + 1] + cur[i - nx] + cur[i + nx] - 4.0 * cur[i];
        next[i] = 2.0 * cur[i] - next[i] + c2 * lap;
      }
    }
    impose(next, n);
    std::swap(next, cur);
  }

  Image out = detail::extract_image(lat, cur, grid, q);
  for (std::size_t iy = 0; iy < grid.height; ++iy) {
    for (std::size_t ix = 0; ix < grid.width; ++ix) {
      const Point p = grid.position(ix, iy);
      if (std::hypot(p.x - geom.center.x, p.y - geom.center.y) >= R) out(ix, iy) = 0.0;
    }
  }
  return out;
}

Image reconstruct_textured(const SensorData& m, const BandSpec& band, const Grid& grid,
                           const SolverConfig& cfg, const ReconstructOptions& opts) {
  require(m.causal(), "reconstruct_textured: measurements must be causal");
  const SensorData even = make_even(apply_bandpass(m, band));
  return reconstruct_time_reversal(restrict_nonnegative(even), grid, cfg, opts);
}

}  // namespace pae
