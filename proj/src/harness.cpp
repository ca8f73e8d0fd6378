#include "pae/harness.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pae/metrics.hpp"
#include "pae/reconstruct.hpp"
#include "parallel.hpp"

#ifndef PAE_VERSION
#define PAE_VERSION "0.0.0"
#endif

namespace pae {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string number(double v, int digits = 8) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// ---- config schema -------------------------------------------------------

void known_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(ErrorKind::config, where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(ErrorKind::config, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::config, where + "." + key + " has the wrong type");
  }
}

void read_point(const json& j, const char* key, Point& p, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(ErrorKind::config, where + "." + key + " must be [x, y]");
  }
  p = {v[0].get<double>(), v[1].get<double>()};
}

json point_json(Point p) { return json::array({p.x, p.y}); }

const char* phantom_name(PhantomKind k) {
  switch (k) {
    case PhantomKind::disc: return "disc";
    case PhantomKind::annulus: return "annulus";
    case PhantomKind::branching_tree: return "branching_tree";
  }
  return "";
}

const char* deformation_name(DeformationKind k) {
  switch (k) {
    case DeformationKind::rigid_translation: return "rigid_translation";
    case DeformationKind::rigid_rotation: return "rigid_rotation";
    case DeformationKind::nonrigid_bump: return "nonrigid_bump";
  }
  return "";
}

SensorGeometry default_sensors(const Grid& g) {
  SensorGeometry s;
  s.radius = 0.47 * static_cast<double>(std::min(g.width, g.height)) * g.dx;
  s.num_sensors = static_cast<std::size_t>(std::ceil(kPi * s.radius / g.dx));
  return s;
}

PhantomSpec default_phantom(PhantomKind kind, const ExperimentConfig& cfg) {
  const double R = cfg.sensors.radius;
  PhantomSpec p;
  p.kind = kind;
  p.seed = cfg.seed;
  switch (kind) {
    case PhantomKind::disc:
      p.center = cfg.sensors.center;
      p.radius = 0.25 * R;
      break;
    case PhantomKind::annulus:
      p.center = cfg.sensors.center;
      p.radius = 0.4 * R;
      p.inner_radius = 0.25 * R;
      break;
    case PhantomKind::branching_tree:
      p.center = {cfg.sensors.center.x, cfg.sensors.center.y - 0.6 * R};
      p.depth = 4;
      p.trunk_length = 0.4 * R;
      p.trunk_width = 0.12 * R;
      break;
  }
  return p;
}

DeformationSpec default_deformation(DeformationKind kind, const ExperimentConfig& cfg) {
  DeformationSpec d;
  d.kind = kind;
  const double dx = cfg.grid.dx;
  switch (kind) {
    case DeformationKind::rigid_translation:
      d.shift = {1.5 * dx, 0.5 * dx};
      break;
    case DeformationKind::rigid_rotation:
      d.pivot = cfg.sensors.center;
      d.angle = 0.02;
      break;
    case DeformationKind::nonrigid_bump:
      d.bump_center = cfg.sensors.center;
      d.bump_sigma = 0.35 * cfg.sensors.radius;
      d.bump_amplitude = 2.0 * dx;
      d.bump_direction = 0.3;
      break;
  }
  return d;
}

std::vector<TextureMode> default_modes() {
  TextureMode none;
  TextureMode gauss;
  gauss.kind = TextureKind::gauss;
  TextureMode b04;
  b04.kind = TextureKind::band;
  b04.band = {0.4, 10.0};
  TextureMode b18 = b04;
  b18.band = {1.8, 10.0};
  return {none, gauss, b04, b18};
}

TextureMode parse_mode(const json& j, std::size_t k) {
  const std::string where = "modes[" + std::to_string(k) + "]";
  if (j.is_string()) {
    if (j.get<std::string>() != "none") fail(ErrorKind::config, where + ": only \"none\" may be given as a string");
    return {};
  }
  known_keys(j, where, {"kind", "alpha", "seed", "kappa_min", "kappa_max"});
  std::string kind;
  read(j, "kind", kind, where);
  TextureMode m;
  if (kind == "none") {
    m.kind = TextureKind::none;
  } else if (kind == "gauss") {
    m.kind = TextureKind::gauss;
    read(j, "alpha", m.alpha, where);
    read(j, "seed", m.seed, where);
  } else if (kind == "band") {
    m.kind = TextureKind::band;
    read(j, "kappa_min", m.band.kappa_min, where);
    read(j, "kappa_max", m.band.kappa_max, where);
  } else {
    fail(ErrorKind::config, where + ": kind must be none, gauss or band");
  }
  return m;
}

json mode_json(const TextureMode& m) {
  switch (m.kind) {
    case TextureKind::none: return {{"kind", "none"}};
    case TextureKind::gauss: return {{"kind", "gauss"}, {"alpha", m.alpha}, {"seed", m.seed}};
    case TextureKind::band:
      return {{"kind", "band"}, {"kappa_min", m.band.kappa_min}, {"kappa_max", m.band.kappa_max}};
  }
  return {};
}

ExperimentConfig from_json(const json& root) {
  known_keys(root, "config", {"seed", "output_dir", "grid", "sensors", "phantom", "deformation", "solver", "flow",
                              "modes", "lambdas", "headline_lambdas", "reference_length"});
  ExperimentConfig cfg = default_experiment();
  read(root, "seed", cfg.seed, "config");
  std::string out = cfg.output_dir.string();
  read(root, "output_dir", out, "config");
  cfg.output_dir = out;
  read(root, "reference_length", cfg.reference_length, "config");

  if (root.contains("grid")) {
    const json& j = root.at("grid");
    known_keys(j, "grid", {"width", "height", "dx"});
    std::size_t w = cfg.grid.width;
    read(j, "width", w, "grid");
    std::size_t h = w;
    read(j, "height", h, "grid");
    double dx = cfg.grid.dx;
    read(j, "dx", dx, "grid");
    if (w == 0 || h == 0 || !(dx > 0.0)) fail(ErrorKind::config, "grid needs positive width, height and dx");
    cfg.grid = Grid::centered(w, h, dx);
  }

  cfg.sensors = default_sensors(cfg.grid);
  if (root.contains("sensors")) {
    const json& j = root.at("sensors");
    known_keys(j, "sensors", {"radius", "count", "center"});
    const bool has_count = j.contains("count");
    read(j, "radius", cfg.sensors.radius, "sensors");
    read(j, "count", cfg.sensors.num_sensors, "sensors");
    read_point(j, "center", cfg.sensors.center, "sensors");
    if (!has_count && cfg.sensors.radius > 0.0) {
      cfg.sensors.num_sensors = static_cast<std::size_t>(std::ceil(kPi * cfg.sensors.radius / cfg.grid.dx));
    }
  }

  PhantomKind pkind = PhantomKind::branching_tree;
  if (root.contains("phantom")) {
    const json& j = root.at("phantom");
    known_keys(j, "phantom", {"kind", "amplitude", "center", "radius", "inner_radius", "depth", "trunk_length",
                              "trunk_width", "direction", "branch_angle", "length_ratio", "width_ratio", "jitter",
                              "seed"});
    std::string kind = phantom_name(pkind);
    read(j, "kind", kind, "phantom");
    if (kind == "disc") pkind = PhantomKind::disc;
    else if (kind == "annulus") pkind = PhantomKind::annulus;
    else if (kind == "branching_tree") pkind = PhantomKind::branching_tree;
    else fail(ErrorKind::config, "phantom.kind must be disc, annulus or branching_tree");
  }
  cfg.phantom = default_phantom(pkind, cfg);
  if (root.contains("phantom")) {
    const json& j = root.at("phantom");
    PhantomSpec& p = cfg.phantom;
    read(j, "amplitude", p.amplitude, "phantom");
    read_point(j, "center", p.center, "phantom");
    read(j, "radius", p.radius, "phantom");
    read(j, "inner_radius", p.inner_radius, "phantom");
    read(j, "depth", p.depth, "phantom");
    read(j, "trunk_length", p.trunk_length, "phantom");
    read(j, "trunk_width", p.trunk_width, "phantom");
    read(j, "direction", p.direction, "phantom");
    read(j, "branch_angle", p.branch_angle, "phantom");
    read(j, "length_ratio", p.length_ratio, "phantom");
    read(j, "width_ratio", p.width_ratio, "phantom");
    read(j, "jitter", p.jitter, "phantom");
    read(j, "seed", p.seed, "phantom");
  }
  cfg.phantom.grid = cfg.grid;
  cfg.phantom.enclosing = cfg.sensors;

  DeformationKind dkind = DeformationKind::rigid_translation;
  if (root.contains("deformation")) {
    const json& j = root.at("deformation");
    known_keys(j, "deformation", {"kind", "shift", "angle", "pivot", "center", "sigma", "amplitude", "direction"});
    std::string kind = deformation_name(dkind);
    read(j, "kind", kind, "deformation");
    if (kind == "rigid_translation") dkind = DeformationKind::rigid_translation;
    else if (kind == "rigid_rotation") dkind = DeformationKind::rigid_rotation;
    else if (kind == "nonrigid_bump") dkind = DeformationKind::nonrigid_bump;
    else fail(ErrorKind::config, "deformation.kind must be rigid_translation, rigid_rotation or nonrigid_bump");
  }
  cfg.deformation = default_deformation(dkind, cfg);
  if (root.contains("deformation")) {
    const json& j = root.at("deformation");
    DeformationSpec& d = cfg.deformation;
    read_point(j, "shift", d.shift, "deformation");
    read(j, "angle", d.angle, "deformation");
    read_point(j, "pivot", d.pivot, "deformation");
    read_point(j, "center", d.bump_center, "deformation");
    read(j, "sigma", d.bump_sigma, "deformation");
    read(j, "amplitude", d.bump_amplitude, "deformation");
    read(j, "direction", d.bump_direction, "deformation");
  }

  if (root.contains("solver")) {
    const json& j = root.at("solver");
    known_keys(j, "solver", {"cfl", "oversampling", "padding_factor", "sponge_cells", "sponge_strength",
                             "total_time", "reflection_free"});
    SolverConfig& s = cfg.solver;
    read(j, "cfl", s.cfl, "solver");
    read(j, "oversampling", s.oversampling, "solver");
    read(j, "padding_factor", s.padding_factor, "solver");
    read(j, "sponge_cells", s.sponge_cells, "solver");
    read(j, "sponge_strength", s.sponge_strength, "solver");
    read(j, "total_time", s.total_time, "solver");
    read(j, "reflection_free", s.reflection_free, "solver");
  }

  if (root.contains("flow")) {
    const json& j = root.at("flow");
    known_keys(j, "flow", {"max_iterations", "tolerance", "relaxation"});
    read(j, "max_iterations", cfg.flow.max_iterations, "flow");
    read(j, "tolerance", cfg.flow.tolerance, "flow");
    read(j, "relaxation", cfg.flow.relaxation, "flow");
  }

  if (root.contains("modes")) {
    const json& j = root.at("modes");
    if (!j.is_array()) fail(ErrorKind::config, "modes must be a list");
    cfg.modes.clear();
    for (std::size_t k = 0; k < j.size(); ++k) cfg.modes.push_back(parse_mode(j[k], k));
  }
  read(root, "lambdas", cfg.lambdas, "config");
  read(root, "headline_lambdas", cfg.headline_lambdas, "config");
  return cfg;
}

// ---- run -------------------------------------------------------------------

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

bool same_lambda(double a, double b) { return std::abs(a - b) <= 1e-4 * std::abs(b); }

struct Pair {
  Image f1, f2;
};

}  // namespace

std::string TextureMode::label() const {
  switch (kind) {
    case TextureKind::none: return "none";
    case TextureKind::gauss: return "gauss-" + number(alpha, 6);
    case TextureKind::band: return "band-" + number(band.kappa_min, 6) + "-" + number(band.kappa_max, 6);
  }
  return "";
}

std::uint64_t ExperimentConfig::mode_seed(std::size_t k) const {
  return modes.at(k).seed != 0 ? modes[k].seed : seed + 1 + k;
}

void ExperimentConfig::validate() const {
  try {
    grid.validate();
    sensors.validate();
    solver.validate(sensors);
    flow.validate();
    if (modes.empty()) fail(ErrorKind::config, "at least one texture mode is required");
    if (lambdas.empty()) fail(ErrorKind::config, "the lambda grid is empty");
    for (double l : lambdas) require(std::isfinite(l) && l > 0.0, "lambdas must be positive");
    for (double l : headline_lambdas) require(std::isfinite(l) && l > 0.0, "headline lambdas must be positive");
    require(reference_length >= 0.0 && std::isfinite(reference_length), "reference_length must be nonnegative");
    std::set<std::string> labels;
    bool acoustic = false;
    for (const auto& m : modes) {
      if (!labels.insert(m.label()).second) fail(ErrorKind::config, "duplicate texture mode '" + m.label() + "'");
      if (m.kind == TextureKind::gauss) require(m.alpha >= 0.0 && std::isfinite(m.alpha), "gauss alpha must be >= 0");
      if (m.kind == TextureKind::band) {
        m.band.validate();
        require(!m.band.empty(), "band mode needs kappa_min < kappa_max");
      }
      acoustic = acoustic || m.kind != TextureKind::gauss;
    }
    if (acoustic) {
      require(static_cast<double>(sensors.num_sensors) >= kPi * sensors.radius / (2.0 * grid.dx),
              "too few sensors for time reversal (need one per 4 grid cells of arc)");
      require(solver.resolved_time(sensors) >= 2.0 * sensors.radius,
              "solver total_time must cover the sensor diameter");
    }
    require(phantom.grid == grid, "phantom grid differs from the experiment grid");
    const Image f = make_phantom(phantom);
    const DisplacementField u = make_displacement(deformation, grid);
    (void)f;
    (void)u;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    fail(ErrorKind::config, e.what());
  }
}

ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  cfg.grid = Grid::centered(128, 128);
  cfg.sensors = default_sensors(cfg.grid);
  cfg.phantom = default_phantom(PhantomKind::branching_tree, cfg);
  cfg.phantom.grid = cfg.grid;
  cfg.phantom.enclosing = cfg.sensors;
  cfg.deformation = default_deformation(DeformationKind::rigid_translation, cfg);
  cfg.flow.tolerance = 1e-5;
  cfg.modes = default_modes();
  cfg.lambdas = default_lambda_grid();
  return cfg;
}

ExperimentConfig parse_experiment(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (root.is_object() && root.contains("config") && root.value("format", std::string{}) == "pae-manifest") {
    return from_json(root.at("config"));
  }
  return from_json(root);
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str());
}

std::string experiment_to_json(const ExperimentConfig& cfg) {
  const PhantomSpec& p = cfg.phantom;
  const DeformationSpec& d = cfg.deformation;
  const SolverConfig& s = cfg.solver;
  json j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["reference_length"] = cfg.reference_length;
  j["grid"] = {{"width", cfg.grid.width}, {"height", cfg.grid.height}, {"dx", cfg.grid.dx}};
  j["sensors"] = {{"radius", cfg.sensors.radius},
                  {"count", cfg.sensors.num_sensors},
                  {"center", point_json(cfg.sensors.center)}};
  j["phantom"] = {{"kind", phantom_name(p.kind)},     {"amplitude", p.amplitude},
                  {"center", point_json(p.center)},   {"radius", p.radius},
                  {"inner_radius", p.inner_radius},   {"depth", p.depth},
                  {"trunk_length", p.trunk_length},   {"trunk_width", p.trunk_width},
                  {"direction", p.direction},         {"branch_angle", p.branch_angle},
                  {"length_ratio", p.length_ratio},   {"width_ratio", p.width_ratio},
                  {"jitter", p.jitter},               {"seed", p.seed}};
  j["deformation"] = {{"kind", deformation_name(d.kind)}, {"shift", point_json(d.shift)},
                      {"angle", d.angle},                 {"pivot", point_json(d.pivot)},
                      {"center", point_json(d.bump_center)}, {"sigma", d.bump_sigma},
                      {"amplitude", d.bump_amplitude},    {"direction", d.bump_direction}};
  j["solver"] = {{"cfl", s.cfl},
                 {"oversampling", s.oversampling},
                 {"padding_factor", s.padding_factor},
                 {"sponge_cells", s.sponge_cells},
                 {"sponge_strength", s.sponge_strength},
                 {"total_time", s.total_time},
                 {"reflection_free", s.reflection_free}};
  j["flow"] = {{"max_iterations", cfg.flow.max_iterations},
               {"tolerance", cfg.flow.tolerance},
               {"relaxation", cfg.flow.relaxation}};
  j["modes"] = json::array();
  for (const auto& m : cfg.modes) j["modes"].push_back(mode_json(m));
  j["lambdas"] = cfg.lambdas;
  j["headline_lambdas"] = cfg.headline_lambdas;
  return j.dump(2);
}

std::string report_csv(const std::vector<ErrorRow>& rows) {
  std::string out = "Texture Mode,AAE,AEEabs,AEErel,Warping\r\n";
  for (const auto& r : rows) {
    out += csv_field(r.texture_mode) + "," + number(r.aae) + "," + number(r.aee_abs) + "," + number(r.aee_rel) +
           "," + number(r.warping) + "\r\n";
  }
  return out;
}

bool ExperimentResult::ok() const {
  return std::all_of(modes.begin(), modes.end(), [](const ModeOutcome& m) { return m.ok(); });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory '" + dir.string() + "': " + ec.message());

  ExperimentResult res;
  auto& trace = res.trace;
  auto save = [&](const fs::path& name) { res.files.push_back(name); };

  const Image f = make_phantom(cfg.phantom);
  const DisplacementField u0 = make_displacement(cfg.deformation, cfg.grid);
  const Image support = support_mask(f);
  const Mask mask = magnitude_mask(u0);
  const std::size_t mask_pixels = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  trace.push_back("shared make_phantom kind=" + std::string(phantom_name(cfg.phantom.kind)));
  trace.push_back("shared make_displacement kind=" + std::string(deformation_name(cfg.deformation.kind)));
  write_image(f, dir / "phantom.f64");
  write_image(support, dir / "support_mask.f64");
  write_displacement(u0, dir / "u0.disp");
  save("phantom.f64");
  save("support_mask.f64");
  save("u0.disp");

  const std::size_t n_modes = cfg.modes.size();
  res.modes.resize(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    res.modes[k].mode = cfg.modes[k];
    res.modes[k].label = cfg.modes[k].label();
  }

  // Measurements of the phantom before and after deformation, shared by every
  // mode that goes through the acoustic chain.
  const bool acoustic = std::any_of(cfg.modes.begin(), cfg.modes.end(),
                                    [](const TextureMode& m) { return m.kind != TextureKind::gauss; });
  SensorData m1, m2;
  std::string acoustic_error;
  if (acoustic) {
    try {
      trace.push_back("shared warp_image source=phantom");
      const Image fw = warp_image(f, u0);
      trace.push_back("shared simulate source=phantom");
      trace.push_back("shared simulate source=warped_phantom");
      const Image* sources[2] = {&f, &fw};
      SensorData* outs[2] = {&m1, &m2};
      detail::parallel_for(2, [&](std::size_t i) { *outs[i] = simulate(*sources[i], cfg.sensors, cfg.solver); });
    } catch (const std::exception& e) {
      acoustic_error = std::string("simulation failed: ") + e.what();
    }
  }

  std::vector<Pair> pairs(n_modes);
  std::vector<std::vector<std::string>> mode_trace(n_modes);
  const double ref = cfg.resolved_reference_length();
  detail::parallel_for(n_modes, [&](std::size_t k) {
    ModeOutcome& out = res.modes[k];
    const TextureMode& m = cfg.modes[k];
    auto& log = mode_trace[k];
    const std::string tag = "[" + out.label + "] ";
    try {
      switch (m.kind) {
        case TextureKind::none:
          if (!acoustic_error.empty()) fail(ErrorKind::runtime, acoustic_error);
          log.push_back(tag + "reconstruct_time_reversal data=phantom");
          pairs[k].f1 = reconstruct_time_reversal(m1, cfg.grid, cfg.solver);
          log.push_back(tag + "reconstruct_time_reversal data=warped_phantom");
          pairs[k].f2 = reconstruct_time_reversal(m2, cfg.grid, cfg.solver);
          break;
        case TextureKind::gauss:
          log.push_back(tag + "add_gaussian_texture alpha=" + number(m.alpha) +
                        " seed=" + std::to_string(cfg.mode_seed(k)));
          pairs[k].f1 = add_gaussian_texture(f, m.alpha, cfg.mode_seed(k));
          log.push_back(tag + "warp_image source=textured_f1");
          pairs[k].f2 = warp_image(pairs[k].f1, u0);
          break;
        case TextureKind::band: {
          if (!acoustic_error.empty()) fail(ErrorKind::runtime, acoustic_error);
          const BandSpec band = m.band.scaled(1.0 / ref);
          log.push_back(tag + "reconstruct_textured data=phantom kappa=[" + number(band.kappa_min) + ", " +
                        number(band.kappa_max) + "]");
          pairs[k].f1 = reconstruct_textured(m1, band, cfg.grid, cfg.solver);
          log.push_back(tag + "reconstruct_textured data=warped_phantom");
          pairs[k].f2 = reconstruct_textured(m2, band, cfg.grid, cfg.solver);
          break;
        }
      }
    } catch (const std::exception& e) {
      out.error = e.what();
      log.push_back(tag + "aborted: " + out.error);
    }
  });
  for (auto& lines : mode_trace) trace.insert(trace.end(), lines.begin(), lines.end());

  // One flow solve per (mode, lambda).
  const std::size_t n_lambda = cfg.lambdas.size();
  std::vector<ErrorRow> rows(n_modes * n_lambda);
  std::vector<FlowResult> flows(n_modes * n_lambda);
  std::vector<std::string> task_error(n_modes * n_lambda);
  detail::parallel_for(n_modes * n_lambda, [&](std::size_t t) {
    const std::size_t k = t / n_lambda;
    if (!res.modes[k].ok()) return;
    try {
      FlowConfig fc = cfg.flow;
      fc.lambda = cfg.lambdas[t % n_lambda];
      flows[t] = horn_schunck(pairs[k].f1, pairs[k].f2, fc);
      const DisplacementField u = to_warp_convention(flows[t].flow);
      ErrorRow& r = rows[t];
      r.texture_mode = res.modes[k].label;
      r.lambda = fc.lambda;
      r.mask_pixels = mask_pixels;
      if (mask_pixels > 0) {
        r.aae = aae(u, u0, mask);
        r.aee_abs = aee(u, u0, mask);
        r.aee_rel = aee_rel(u, u0, mask);
        r.warping = warping_error(pairs[k].f1, pairs[k].f2, u, mask);
      } else {
        // angles and relative errors are undefined without motion
        r.aae = NAN;
        r.aee_rel = NAN;
        r.aee_abs = aee(u, u0);
        r.warping = warping_error(pairs[k].f1, pairs[k].f2, u);
      }
    } catch (const std::exception& e) {
      task_error[t] = e.what();
    }
  });

  std::string per_lambda = "Texture Mode,Lambda,AAE,AEEabs,AEErel,Warping\r\n";
  for (std::size_t k = 0; k < n_modes; ++k) {
    ModeOutcome& out = res.modes[k];
    for (std::size_t l = 0; l < n_lambda && out.ok(); ++l) {
      if (!task_error[k * n_lambda + l].empty()) {
        out.error = "flow at lambda " + number(cfg.lambdas[l]) + ": " + task_error[k * n_lambda + l];
        trace.push_back("[" + out.label + "] aborted: " + out.error);
      }
    }
    if (!out.ok()) continue;

    std::string table = "Lambda,AAE,AEEabs,AEErel,Warping,MaskPixels,Iterations,Converged\r\n";
    for (std::size_t l = 0; l < n_lambda; ++l) {
      const ErrorRow& r = rows[k * n_lambda + l];
      const FlowResult& fr = flows[k * n_lambda + l];
      out.rows.push_back(r);
      if (r.aee_abs < out.rows[out.best].aee_abs) out.best = l;
      table += number(r.lambda) + "," + number(r.aae) + "," + number(r.aee_abs) + "," + number(r.aee_rel) + "," +
               number(r.warping) + "," + std::to_string(r.mask_pixels) + "," + std::to_string(fr.iterations) + "," +
               (fr.converged ? "1" : "0") + "\r\n";
      per_lambda += csv_field(out.label) + "," + number(r.lambda) + "," + number(r.aae) + "," + number(r.aee_abs) +
                    "," + number(r.aee_rel) + "," + number(r.warping) + "\r\n";
    }
    out.best_flow = to_warp_convention(flows[k * n_lambda + out.best].flow);
    res.report.rows.push_back(out.rows[out.best]);
    trace.push_back("[" + out.label + "] lambda_sweep count=" + std::to_string(n_lambda) +
                    " best=" + number(out.rows[out.best].lambda));

    write_text(dir / (out.label + ".csv"), table);
    write_image(pairs[k].f1, dir / (out.label + "_f1.f64"));
    write_image(pairs[k].f2, dir / (out.label + "_f2.f64"));
    write_displacement(out.best_flow, dir / (out.label + "_flow.disp"));
    for (const char* suffix : {".csv", "_f1.f64", "_f2.f64", "_flow.disp"}) save(out.label + suffix);
  }
  flows.clear();

  write_text(dir / "errors_vs_lambda.csv", per_lambda);
  save("errors_vs_lambda.csv");
  res.report.validate();
  write_text(dir / "report.csv", report_csv(res.report.rows));
  save("report.csv");
  for (double h : cfg.headline_lambdas) {
    std::vector<ErrorRow> headline;
    for (const auto& out : res.modes) {
      for (const auto& r : out.rows) {
        if (same_lambda(r.lambda, h)) headline.push_back(r);
      }
    }
    if (headline.empty()) continue;
    const std::string name = "report_lambda_" + number(h, 6) + ".csv";
    write_text(dir / name, report_csv(headline));
    save(name);
  }

  for (const auto& p : emit_plots(cfg, res, u0, support)) save(p);

  std::string log;
  for (const auto& line : trace) log += line + "\n";
  write_text(dir / "pipeline.log", log);
  save("pipeline.log");

  json manifest;
  manifest["format"] = "pae-manifest";
  manifest["version"] = PAE_VERSION;
  manifest["fftw"] = std::string(fftw_version);
  manifest["config"] = json::parse(experiment_to_json(cfg));
  manifest["seeds"]["global"] = cfg.seed;
  manifest["seeds"]["phantom"] = cfg.phantom.seed;
  manifest["mask_pixels"] = mask_pixels;
  manifest["visualized_mask"] = "support_mask.f64";
  for (std::size_t k = 0; k < n_modes; ++k) {
    const ModeOutcome& out = res.modes[k];
    if (cfg.modes[k].kind == TextureKind::gauss) manifest["seeds"][out.label] = cfg.mode_seed(k);
    if (out.ok()) {
      manifest["best_lambda"][out.label] = out.rows[out.best].lambda;
    } else {
      manifest["failures"][out.label] = out.error;
    }
  }
  res.files.push_back("manifest.json");
  manifest["files"] = json::array();
  for (const auto& p : res.files) manifest["files"].push_back(p.string());
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return res;
}

}  // namespace pae
