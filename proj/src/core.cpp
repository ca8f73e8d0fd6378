#include "pae/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pae {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Grid Grid::centered(std::size_t width, std::size_t height, double dx) {
  Grid g;
  g.width = width;
  g.height = height;
  g.dx = dx;
  g.origin = {-0.5 * dx * static_cast<double>(width - 1), -0.5 * dx * static_cast<double>(height - 1)};
  return g;
}

void Grid::validate() const {
  require(width > 0 && height > 0, "grid must have positive width and height");
  require(std::isfinite(dx) && dx > 0.0, "grid spacing dx must be positive and finite");
  require(std::isfinite(origin.x) && std::isfinite(origin.y), "grid origin must be finite");
}

Image::Image(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) { grid_.validate(); }

Image::Image(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    std::ostringstream os;
    os << "image payload has " << values_.size() << " values, grid needs " << grid_.size();
    fail(ErrorKind::invalid_argument, os.str());
  }
  for (double v : values_) require(std::isfinite(v), "image values must be finite");
}

double resample_bilinear(const Image& img, Point p) {
  const Grid& g = img.grid();
  const double maxx = static_cast<double>(g.width - 1);
  const double maxy = static_cast<double>(g.height - 1);
  const double fx = std::clamp((p.x - g.origin.x) / g.dx, 0.0, maxx);
  const double fy = std::clamp((p.y - g.origin.y) / g.dx, 0.0, maxy);
  const auto x0 = static_cast<std::size_t>(std::floor(fx));
  const auto y0 = static_cast<std::size_t>(std::floor(fy));
  const std::size_t x1 = std::min(x0 + 1, g.width - 1);
  const std::size_t y1 = std::min(y0 + 1, g.height - 1);
  const double tx = fx - static_cast<double>(x0);
  const double ty = fy - static_cast<double>(y0);
  const double top = (1.0 - tx) * img(x0, y0) + tx * img(x1, y0);
  const double bottom = (1.0 - tx) * img(x0, y1) + tx * img(x1, y1);
  return (1.0 - ty) * top + ty * bottom;
}

double SensorGeometry::angle(std::size_t k) const {
  return 2.0 * kPi * static_cast<double>(k) / static_cast<double>(num_sensors);
}

Point SensorGeometry::sensor(std::size_t k) const {
  const double a = angle(k);
  return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
}

void SensorGeometry::validate() const {
  require(num_sensors >= 3, "sensor geometry needs at least 3 sensors");
  require(std::isfinite(radius) && radius > 0.0, "sensor radius must be positive");
  require(std::isfinite(center.x) && std::isfinite(center.y), "sensor center must be finite");
}

SensorData::SensorData(const SensorGeometry& geometry, double dt, std::size_t num_steps,
                       std::size_t time_origin)
    : geometry_(geometry), dt_(dt), num_steps_(num_steps), time_origin_(time_origin),
      values_(geometry.num_sensors * num_steps, 0.0) {
  geometry_.validate();
  require(std::isfinite(dt) && dt > 0.0, "sensor data dt must be positive");
  require(num_steps > 0, "sensor data needs at least one time step");
  require(time_origin < num_steps, "time origin must index a stored sample");
}

double SensorData::sample(std::size_t sensor, double t) const {
  const double pos = t / dt_ + static_cast<double>(time_origin_);
  if (pos < 0.0 || pos > static_cast<double>(num_steps_ - 1)) return 0.0;
  const auto n0 = static_cast<std::size_t>(std::floor(pos));
  const std::size_t n1 = std::min(n0 + 1, num_steps_ - 1);
  const double w = pos - static_cast<double>(n0);
  const auto tr = trace(sensor);
  return (1.0 - w) * tr[n0] + w * tr[n1];
}

double DisplacementField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t i = 0; i < ux.size(); ++i) m = std::max(m, std::hypot(ux[i], uy[i]));
  return m;
}

void BandSpec::validate() const {
  require(std::isfinite(kappa_min) && std::isfinite(kappa_max), "band edges must be finite");
  require(kappa_min >= 0.0, "band kappa_min must be nonnegative");
  require(kappa_min <= kappa_max, "band kappa_min must not exceed kappa_max");
}

void ErrorReport::validate() const {
  auto check = [](const ErrorRow& r, double v, bool may_be_undefined) {
    if (may_be_undefined && std::isnan(v)) return;
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::runtime, "error report row '" + r.texture_mode + "' has an invalid entry");
    }
  };
  for (const auto& r : rows) {
    // angle and relative errors are undefined when no pixel moves
    check(r, r.aae, r.mask_pixels == 0);
    check(r, r.aee_rel, r.mask_pixels == 0);
    check(r, r.aee_abs, false);
    check(r, r.warping, false);
  }
}

double relative_l2(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

}  // namespace pae
