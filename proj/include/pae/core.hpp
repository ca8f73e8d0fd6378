#pragma once

// Shared domain types for the photoacoustic elastography pipeline.
//
// Conventions used everywhere in the library:
//   * sound speed is 1, so time and length share units and every angular
//     frequency is in radians per length unit;
//   * images are row-major, pixel (ix, iy) has its center at
//     origin + dx * (ix, iy);
//   * scalars are 64-bit floats.

#include <cstddef>
#include <filesystem>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pae {

inline constexpr double kPi = std::numbers::pi;

/// Error categories surfaced through the C API as distinct codes.
enum class ErrorKind { invalid_argument, config, io, runtime };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);
inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::invalid_argument, what);
}

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Grid metadata shared by images and displacement fields.
struct Grid {
  std::size_t width = 0;
  std::size_t height = 0;
  double dx = 1.0;
  Point origin{};  // center of pixel (0, 0)

  std::size_t size() const { return width * height; }
  Point position(std::size_t ix, std::size_t iy) const {
    return {origin.x + dx * static_cast<double>(ix), origin.y + dx * static_cast<double>(iy)};
  }
  /// Grid centered on (0, 0) with the given pixel count per side.
  static Grid centered(std::size_t width, std::size_t height, double dx = 1.0);
  void validate() const;
  bool operator==(const Grid&) const = default;
};

class Image {
 public:
  Image() = default;
  explicit Image(const Grid& grid, double fill = 0.0);
  Image(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t width() const { return grid_.width; }
  std::size_t height() const { return grid_.height; }
  double dx() const { return grid_.dx; }

  double& operator()(std::size_t ix, std::size_t iy) { return values_[iy * grid_.width + ix]; }
  double operator()(std::size_t ix, std::size_t iy) const { return values_[iy * grid_.width + ix]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const Image&) const = default;

 private:
  Grid grid_{};
  std::vector<double> values_;
};

/// Bilinear sample of `img` at world coordinates. Queries outside the grid
/// clamp to the nearest boundary pixel.
double resample_bilinear(const Image& img, Point p);

struct SensorGeometry {
  Point center{};
  double radius = 1.0;
  std::size_t num_sensors = 3;

  /// Sensor k sits at angle 2*pi*k/num_sensors.
  Point sensor(std::size_t k) const;
  double angle(std::size_t k) const;
  void validate() const;
  bool operator==(const SensorGeometry&) const = default;
};

/// Time traces on the sensor circle. Sample n of every trace corresponds to
/// t = (n - time_origin) * dt. Causal data has time_origin == 0; two-sided data
/// (the result of band-pass filtering or evenization) has an odd number of
/// samples with time_origin at the center.
class SensorData {
 public:
  SensorData() = default;
  SensorData(const SensorGeometry& geometry, double dt, std::size_t num_steps,
             std::size_t time_origin = 0);

  const SensorGeometry& geometry() const { return geometry_; }
  double dt() const { return dt_; }
  std::size_t num_steps() const { return num_steps_; }
  std::size_t num_sensors() const { return geometry_.num_sensors; }
  std::size_t time_origin() const { return time_origin_; }
  bool causal() const { return time_origin_ == 0; }
  bool symmetric() const { return num_steps_ % 2 == 1 && time_origin_ == num_steps_ / 2; }
  double time(std::size_t n) const {
    return (static_cast<double>(n) - static_cast<double>(time_origin_)) * dt_;
  }

  std::span<double> trace(std::size_t sensor) {
    return {values_.data() + sensor * num_steps_, num_steps_};
  }
  std::span<const double> trace(std::size_t sensor) const {
    return {values_.data() + sensor * num_steps_, num_steps_};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Sample at time t of one sensor, linear in time, zero outside the window.
  double sample(std::size_t sensor, double t) const;

  bool operator==(const SensorData&) const = default;

 private:
  SensorGeometry geometry_{};
  double dt_ = 1.0;
  std::size_t num_steps_ = 0;
  std::size_t time_origin_ = 0;
  std::vector<double> values_;
};

struct DisplacementField {
  DisplacementField() = default;
  explicit DisplacementField(const Grid& g) : grid(g), ux(g.size(), 0.0), uy(g.size(), 0.0) {}

  Grid grid{};
  std::vector<double> ux;
  std::vector<double> uy;

  double max_magnitude() const;
  bool operator==(const DisplacementField&) const = default;
};

/// Hard band window [kappa_min, kappa_max] in radians per length unit.
/// kappa_min == kappa_max is accepted and denotes the empty band.
struct BandSpec {
  double kappa_min = 0.0;
  double kappa_max = 1.0;

  double half_width() const { return 0.5 * (kappa_max - kappa_min); }
  double center() const { return kappa_min + half_width(); }
  bool contains(double kappa) const {
    const double k = kappa < 0 ? -kappa : kappa;
    return k >= kappa_min && k <= kappa_max;
  }
  bool empty() const { return kappa_max <= kappa_min; }
  void validate() const;
  BandSpec scaled(double factor) const { return {kappa_min * factor, kappa_max * factor}; }
};

struct ErrorRow {
  std::string texture_mode;
  double lambda = 0.0;
  double aae = 0.0;
  double aee_abs = 0.0;
  double aee_rel = 0.0;
  double warping = 0.0;
  std::size_t mask_pixels = 0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  void validate() const;
};

// Raw little-endian float64 payload plus a JSON sidecar header ("<path>.json").
void write_image(const Image& img, const std::filesystem::path& path);
Image read_image(const std::filesystem::path& path);
void write_sensor_data(const SensorData& data, const std::filesystem::path& path);
SensorData read_sensor_data(const std::filesystem::path& path);
// Displacement payload stores the ux block followed by the uy block.
void write_displacement(const DisplacementField& u, const std::filesystem::path& path);
DisplacementField read_displacement(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& payload);

/// ||a - b||_2 / ||b||_2 over all samples; 0 when both are zero.
double relative_l2(std::span<const double> a, std::span<const double> b);

}  // namespace pae
