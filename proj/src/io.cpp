#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "pae/core.hpp"

namespace pae {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void write_payload(std::span<const double> values, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double v : values) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      bits = __builtin_bswap64(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

std::vector<double> read_payload(const fs::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  if (bytes % sizeof(double) != 0 || bytes / sizeof(double) != expected) {
    fail(ErrorKind::io, "size mismatch in '" + path.string() + "': header declares " +
                            std::to_string(expected) + " values, payload holds " +
                            std::to_string(bytes / sizeof(double)) +
                            (bytes % sizeof(double) ? " (plus a partial value)" : ""));
  }
  std::vector<double> values(expected);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
  if (!in) fail(ErrorKind::io, "failed reading '" + path.string() + "'");
  if constexpr (std::endian::native == std::endian::big) {
    for (double& v : values) v = std::bit_cast<double>(__builtin_bswap64(std::bit_cast<std::uint64_t>(v)));
  }
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::io, "non-finite value in '" + path.string() + "'");
  }
  return values;
}

void write_header(const json& header, const fs::path& payload) {
  std::ofstream out(sidecar_path(payload), std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write header for '" + payload.string() + "'");
  out << header.dump(2) << '\n';
}

json read_header(const fs::path& payload, const char* kind) {
  std::ifstream in(sidecar_path(payload));
  if (!in) fail(ErrorKind::io, "missing header '" + sidecar_path(payload).string() + "'");
  json header;
  try {
    header = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::io, "malformed header for '" + payload.string() + "': " + e.what());
  }
  if (!header.is_object() || header.value("kind", std::string{}) != kind) {
    fail(ErrorKind::io, "header for '" + payload.string() + "' is not a " + kind + " header");
  }
  return header;
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::io, std::string("malformed header field '") + key + "': " + e.what());
  }
}

Point point_field(const json& j, const char* key) {
  const auto v = field<std::vector<double>>(j, key);
  if (v.size() != 2) fail(ErrorKind::io, std::string("header field '") + key + "' must be [x, y]");
  return {v[0], v[1]};
}

json grid_json(const Grid& g) {
  return {{"width", g.width}, {"height", g.height}, {"dx", g.dx}, {"origin", {g.origin.x, g.origin.y}}};
}

Grid grid_from(const json& h) {
  Grid g;
  g.width = field<std::size_t>(h, "width");
  g.height = field<std::size_t>(h, "height");
  g.dx = field<double>(h, "dx");
  g.origin = point_field(h, "origin");
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorKind::io, std::string("malformed header: ") + e.what());
  }
  return g;
}

}  // namespace

fs::path sidecar_path(const fs::path& payload) {
  fs::path p = payload;
  p += ".json";
  return p;
}

void write_image(const Image& img, const fs::path& path) {
  json h = grid_json(img.grid());
  h["kind"] = "image";
  write_payload(img.values(), path);
  write_header(h, path);
}

Image read_image(const fs::path& path) {
  const json h = read_header(path, "image");
  const Grid g = grid_from(h);
  return Image(g, read_payload(path, g.size()));
}

void write_sensor_data(const SensorData& data, const fs::path& path) {
  const auto& geo = data.geometry();
  json h = {{"kind", "sensor_data"},
            {"num_sensors", geo.num_sensors},
            {"num_steps", data.num_steps()},
            {"dt", data.dt()},
            {"radius", geo.radius},
            {"center", {geo.center.x, geo.center.y}},
            {"time_origin", data.time_origin()}};
  write_payload(data.values(), path);
  write_header(h, path);
}

SensorData read_sensor_data(const fs::path& path) {
  const json h = read_header(path, "sensor_data");
  SensorGeometry geo;
  geo.num_sensors = field<std::size_t>(h, "num_sensors");
  geo.radius = field<double>(h, "radius");
  geo.center = point_field(h, "center");
  const auto steps = field<std::size_t>(h, "num_steps");
  const auto dt = field<double>(h, "dt");
  const auto origin = field<std::size_t>(h, "time_origin");
  SensorData data;
  try {
    data = SensorData(geo, dt, steps, origin);
  } catch (const Error& e) {
    fail(ErrorKind::io, std::string("malformed header: ") + e.what());
  }
  auto values = read_payload(path, geo.num_sensors * steps);
  std::copy(values.begin(), values.end(), data.values().begin());
  return data;
}

void write_displacement(const DisplacementField& u, const fs::path& path) {
  json h = grid_json(u.grid);
  h["kind"] = "displacement";
  h["components"] = 2;
  std::vector<double> both(u.ux);
  both.insert(both.end(), u.uy.begin(), u.uy.end());
  write_payload(both, path);
  write_header(h, path);
}

DisplacementField read_displacement(const fs::path& path) {
  const json h = read_header(path, "displacement");
  const Grid g = grid_from(h);
  auto both = read_payload(path, 2 * g.size());
  DisplacementField u(g);
  std::copy(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(g.size()), u.ux.begin());
  std::copy(both.begin() + static_cast<std::ptrdiff_t>(g.size()), both.end(), u.uy.begin());
  return u;
}

}  // namespace pae
