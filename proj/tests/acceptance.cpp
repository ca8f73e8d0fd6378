// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   pae-acceptance [--only 1,2,...] [--out DIR]

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pae/bandlimit.hpp"
#include "pae/flow.hpp"
#include "pae/harness.hpp"
#include "pae/metrics.hpp"
#include "pae/phantom.hpp"
#include "pae/reconstruct.hpp"
#include "pae/wave.hpp"

using namespace pae;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Image gaussian(std::size_t n, double sigma) {
  Image f(Grid::centered(n, n));
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Point p = f.grid().position(ix, iy);
      f(ix, iy) = std::exp(-(p.x * p.x + p.y * p.y) / (2 * sigma * sigma));
    }
  return f;
}

double interior_error(const Image& a, const Image& ref, double radius) {
  double num = 0.0, den = 0.0;
  for (std::size_t iy = 0; iy < a.height(); ++iy)
    for (std::size_t ix = 0; ix < a.width(); ++ix) {
      const Point p = a.grid().position(ix, iy);
      if (std::hypot(p.x, p.y) > radius) continue;
      num += (a(ix, iy) - ref(ix, iy)) * (a(ix, iy) - ref(ix, iy));
      den += ref(ix, iy) * ref(ix, iy);
    }
  return std::sqrt(num / den);
}

// 1. P(Psi * f) against R Psi *_t P_even f, sensor by sensor.
Verdict band_identity() {
  const double R = 60.0, sigma = 4.0;
  const BandSpec band = BandSpec{0.4, 10.0}.scaled(1.0 / R);
  const SensorGeometry geom{{}, R, 128};

  // Psi * f is not compactly supported; it is formed on a 3x canvas with
  // generous zero padding so that its slowly decaying tail is kept.
  SolverConfig lhs_cfg;
  lhs_cfg.check_support = false;
  lhs_cfg.total_time = 2.0 * R;
  const SensorData lhs = simulate(convolve_psf(gaussian(384, sigma), band, 8.0), geom, lhs_cfg);

  SolverConfig rhs_cfg;
  rhs_cfg.check_support = false;
  rhs_cfg.total_time = 4.0 * R;
  const SensorData even = make_even(simulate(gaussian(128, sigma), geom, rhs_cfg));
  const SensorData rhs = convolve_time(sample_irf(band, even.dt(), even.num_steps()), even);

  double worst = 0.0;
  for (std::size_t s = 0; s < geom.num_sensors; ++s) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < lhs.num_steps(); ++n) {
      const double a = lhs.trace(s)[n];
      const double b = rhs.sample(s, lhs.time(n));
      num += (a - b) * (a - b);
      den += b * b;
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return {worst <= 0.02, fmt("worst per-sensor rel. L2 %.4f <= 0.02 over %zu sensors", worst, geom.num_sensors)};
}

// 2. The spectrum of the evenized trace is twice the real part of the causal
// spectrum (t = 0 sample at half weight), checked by direct DTFT sums.
Verdict even_extension_spectrum() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<std::size_t> len(8, 160);
  double worst_mirror = 0.0, worst_spec = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const std::size_t steps = len(gen);
    const double dt = 0.05 + 0.01 * (c % 7);
    SensorData m({{}, 10.0, 3}, dt, steps);
    for (auto& v : m.values()) v = nd(gen);
    const SensorData even = make_even(m);
    const SensorData mirror = oracle::mirror_even(m);
    double scale = 0.0;
    for (double v : m.values()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < even.values().size(); ++i) {
      worst_mirror = std::max(worst_mirror, std::abs(even.values()[i] - mirror.values()[i]) / scale);
    }
    for (std::size_t s = 0; s < 3; ++s) {
      const auto tr = m.trace(s);
      const auto ev = even.trace(s);
      const std::size_t nf = 2 * steps - 1;
      double peak = 0.0, err = 0.0;
      for (std::size_t k = 0; k < nf; ++k) {
        const double w = 2.0 * kPi * static_cast<double>(k) / (static_cast<double>(nf) * dt);
        std::complex<double> causal = 0.5 * tr[0];
        for (std::size_t n = 1; n < steps; ++n) causal += tr[n] * std::polar(1.0, -w * m.time(n));
        std::complex<double> two_sided = 0.0;
        for (std::size_t n = 0; n < nf; ++n) two_sided += ev[n] * std::polar(1.0, -w * even.time(n));
        peak = std::max(peak, std::abs(two_sided));
        err = std::max(err, std::abs(two_sided - 2.0 * causal.real()));
      }
      worst_spec = std::max(worst_spec, err / peak);
    }
  }
  const bool pass = worst_mirror <= 1e-12 && worst_spec <= 1e-12;
  return {pass, fmt("1000 traces: mirror oracle %.2e, spectral identity %.2e (both <= 1e-12)", worst_mirror,
                    worst_spec)};
}

// 3. Abel transform of the psf against the irf.
Verdict abel_closure() {
  std::string detail;
  bool pass = true;
  for (const BandSpec band : {BandSpec{0.4, 10.0}, BandSpec{1.8, 10.0}}) {
    std::vector<double> s, ref;
    for (int i = 0; i <= 400; ++i) s.push_back(20.0 / band.kappa_max * i / 400.0);
    for (double v : s) ref.push_back(irf(v, band));
    const double e = relative_l2(abel_radial(band, s), ref);
    pass = pass && e <= 0.02;
    detail += fmt("band (%g, %g): %.2e  ", band.kappa_min, band.kappa_max, e);
  }
  return {pass, detail + "(<= 0.02)"};
}

// 4. psf spot values, with the closed form checked against the Hankel oracle.
Verdict psf_values() {
  const BandSpec band{0.4, 10.0};
  const double p0 = psf(0.0, band), p1 = psf(1.0, band);
  const double h1 = oracle::psf_hankel(1.0, band);
  const bool pass = std::abs(p0 - 7.94505) <= 1e-4 && std::abs(p1 - 0.056712) <= 1e-4 && std::abs(p1 - h1) <= 1e-8;
  return {pass, fmt("psf(0) = %.6f (7.94505 +- 1e-4), psf(1) = %.6f (0.056712 +- 1e-4), J1 oracle %.6f", p0, p1, h1)};
}

// 5. Disc round trip on a 256 grid with 256 sensors.
Verdict round_trip() {
  const std::size_t n = 256;
  const Grid g = Grid::centered(n, n);
  const SensorGeometry geom{{}, 0.47 * n, 256};
  PhantomSpec spec;
  spec.grid = g;
  spec.radius = geom.radius / 4.0;
  const Image f = make_phantom(spec);
  const SolverConfig cfg;
  const SensorData m = simulate(f, geom, cfg);
  const double full = interior_error(reconstruct_time_reversal(m, g, cfg), f, geom.radius);
  const BandSpec band = BandSpec{0.4, 10.0}.scaled(1.0 / geom.radius);
  const double tex = interior_error(reconstruct_textured(m, band, g, cfg), convolve_psf(f, band), 0.8 * geom.radius);
  return {full <= 0.15 && tex <= 0.10,
          fmt("full band %.4f <= 0.15, textured vs convolve_psf %.4f <= 0.10", full, tex)};
}

// 6. Horn-Schunck on the ramp pair and on a translated smooth texture.
Verdict flow_solver() {
  const std::size_t n = 32;
  Image r1(Grid::centered(n, n)), r2(r1.grid());
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      r1(ix, iy) = static_cast<double>(ix);
      r2(ix, iy) = static_cast<double>(ix) - 1.0;
    }
  FlowConfig exact;
  exact.tolerance = 1e-12;
  const auto ramp = horn_schunck(r1, r2, exact);
  double ramp_err = 0.0;
  for (std::size_t i = 0; i < ramp.flow.ux.size(); ++i) {
    ramp_err = std::max(ramp_err, std::hypot(ramp.flow.ux[i] - 1.0, ramp.flow.uy[i]));
  }

  // noise blurred by a Gaussian of 3 px, shifted by 2 px
  const std::size_t m = 64;
  Image noise(Grid::centered(m, m));
  std::mt19937 gen(17);
  std::normal_distribution<double> nd;
  for (auto& v : noise.values()) v = nd(gen);
  const int half = 9;
  std::vector<double> k(2 * half + 1);
  for (int j = -half; j <= half; ++j) k[j + half] = std::exp(-j * j / 18.0);
  Image tmp(noise.grid()), f1(noise.grid());
  const int mi = static_cast<int>(m);
  for (int iy = 0; iy < mi; ++iy)
    for (int ix = 0; ix < mi; ++ix) {
      double s = 0.0;
      for (int j = -half; j <= half; ++j) s += k[j + half] * noise(std::clamp(ix + j, 0, mi - 1), iy);
      tmp(ix, iy) = s;
    }
  for (int iy = 0; iy < mi; ++iy)
    for (int ix = 0; ix < mi; ++ix) {
      double s = 0.0;
      for (int j = -half; j <= half; ++j) s += k[j + half] * tmp(ix, std::clamp(iy + j, 0, mi - 1));
      f1(ix, iy) = s;
    }
  double peak = 0.0;
  for (double v : f1.values()) peak = std::max(peak, std::abs(v));
  for (auto& v : f1.values()) v /= peak;
  DisplacementField u0(f1.grid());
  std::fill(u0.ux.begin(), u0.ux.end(), -2.0);
  const Image f2 = warp_image(f1, u0);
  const auto sweep = lambda_sweep(f1, f2, default_lambda_grid(), FlowConfig{});
  double best = INFINITY;
  for (const auto& r : sweep) best = std::min(best, aee(to_warp_convention(r.flow), u0));
  return {ramp_err <= 1e-6 && best <= 0.3,
          fmt("ramp max |u - (1,0)| %.2e <= 1e-6, texture best-lambda AEE %.4f px <= 0.3", ramp_err, best)};
}

struct Runs {
  fs::path root;
  std::vector<ExperimentConfig> configs;
  std::vector<ExperimentResult> results;
};

ExperimentConfig acceptance_config(DeformationKind kind, const fs::path& dir) {
  std::string text = R"({"deformation": {"kind": ")";
  text += kind == DeformationKind::rigid_translation ? "rigid_translation" : "nonrigid_bump";
  text += R"("}, "output_dir": ")" + dir.string() + "\"}";
  return parse_experiment(text);
}

const ErrorRow& best_row(const ExperimentResult& r, const std::string& label) {
  for (const auto& m : r.modes) {
    if (m.label == label && m.ok()) return m.rows[m.best];
  }
  throw Error(ErrorKind::runtime, "mode " + label + " missing or failed");
}

// 7. Rigid and non-rigid runs on the branching phantom.
Verdict elastography(Runs& runs) {
  const DeformationKind kinds[2] = {DeformationKind::rigid_translation, DeformationKind::nonrigid_bump};
  const char* names[2] = {"rigid", "nonrigid"};
  bool pass = true;
  std::string detail;
  for (int d = 0; d < 2; ++d) {
    runs.configs.push_back(acceptance_config(kinds[d], runs.root / names[d]));
    runs.results.push_back(run_experiment(runs.configs.back()));
    const ExperimentResult& r = runs.results.back();
    std::printf("  %s deformation, best lambda per mode:\n", names[d]);
    for (const auto& m : r.modes) {
      if (!m.ok()) {
        std::printf("    %-12s failed: %s\n", m.label.c_str(), m.error.c_str());
        continue;
      }
      const ErrorRow& b = m.rows[m.best];
      std::printf("    %-12s lambda %8.4f  AAE %.4f  AEEabs %.4f  AEErel %.4f  Warping %.5f\n", m.label.c_str(),
                  b.lambda, b.aae, b.aee_abs, b.aee_rel, b.warping);
    }
    if (!r.ok()) {
      pass = false;
      detail += std::string(names[d]) + ": a mode failed; ";
      continue;
    }
    const ErrorRow& none = best_row(r, "none");
    for (const char* band : {"band-0.4-10", "band-1.8-10"}) {
      const ErrorRow& b = best_row(r, band);
      const double rel_gain = none.aee_rel / b.aee_rel;
      const double warp_gain = none.warping / b.warping;
      const bool ok = rel_gain >= 2.0 && warp_gain >= 2.0;
      pass = pass && ok;
      detail += fmt("%s %s: AEErel x%.2f, warping x%.2f%s; ", names[d], band, rel_gain, warp_gain,
                    ok ? "" : " (below 2)");
    }
    const ErrorRow& g = best_row(r, "gauss-0.3");
    double worst = 0.0;
    for (auto [a, b] : {std::pair{g.aae, none.aae}, std::pair{g.aee_abs, none.aee_abs},
                        std::pair{g.aee_rel, none.aee_rel}, std::pair{g.warping, none.warping}}) {
      worst = std::max(worst, std::abs(a - b) / b);
    }
    pass = pass && worst <= 0.05;
    detail += fmt("%s gauss vs none: worst metric deviation %.1f%%%s; ", names[d], 100.0 * worst,
                  worst <= 0.05 ? "" : " (above 5%)");
  }
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Re-run the rigid experiment from its manifest and compare every table.
Verdict determinism(Runs& runs) {
  if (runs.configs.empty()) runs.configs.push_back(acceptance_config(DeformationKind::rigid_translation,
                                                                     runs.root / "rigid"));
  const fs::path first = runs.configs.front().output_dir;
  if (runs.results.empty()) run_experiment(runs.configs.front());
  ExperimentConfig replay = load_experiment(first / "manifest.json");
  replay.output_dir = runs.root / "rigid_replay";
  run_experiment(replay);
  std::size_t compared = 0, differing = 0;
  for (const auto& e : fs::directory_iterator(first)) {
    if (e.path().extension() != ".csv") continue;
    ++compared;
    if (slurp(e.path()) != slurp(replay.output_dir / e.path().filename())) ++differing;
  }
  return {compared > 0 && differing == 0,
          fmt("%zu CSV files compared after a manifest replay, %zu differ", compared, differing)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string out = (fs::temp_directory_path() / "pae_acceptance").string();
  app.add_option("--only", only, "criteria to run")->delimiter(',')->check(CLI::Range(1, 8));
  app.add_option("--out", out, "directory for experiment artifacts");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());

  Runs runs;
  runs.root = out;
  fs::remove_all(runs.root);
  fs::create_directories(runs.root);

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "time-reversed band identity", 120, band_identity},
      {2, "even extension spectrum", 60, even_extension_spectrum},
      {3, "Abel closure", 60, abel_closure},
      {4, "psf spot values", 1, psf_values},
      {5, "reconstruction round trip", 300, round_trip},
      {6, "flow solver", 60, flow_solver},
      {7, "elastography benefit", 1200, [&] { return elastography(runs); }},
      {8, "determinism", 1200, [&] { return determinism(runs); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %s: %s | %s| %.1f s (limit %.0f s)%s\n", c.id, pass ? "PASS" : "FAIL", c.name,
                v.detail.c_str(), secs, c.limit_s, in_time ? "" : " over time");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
