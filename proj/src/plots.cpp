#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pae/harness.hpp"

namespace pae {
namespace {

namespace fs = std::filesystem;

const char* kPalette[] = {"#222222", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void save(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

struct Series {
  std::string name;
  const char* color;
  std::vector<double> x, y;
};

// One log-x panel at (ox, oy). NaN values break the polyline.
void panel(std::ostringstream& svg, double ox, double oy, const std::string& title, const std::vector<Series>& series,
           double lmin, double lmax) {
  const double w = 360, h = 240, ml = 56, mb = 36, mt = 24, mr = 28;
  const double pw = w - ml - mr, ph = h - mt - mb;
  double ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (std::isfinite(v)) ymax = std::max(ymax, v);
    }
  }
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;
  const double a = std::log10(lmin), b = std::log10(lmax);
  auto X = [&](double l) { return ox + ml + (b > a ? (std::log10(l) - a) / (b - a) : 0.5) * pw; };
  auto Y = [&](double v) { return oy + mt + ph - v / ymax * ph; };

  svg << "<g class=\"panel\">\n";
  svg << "<text x=\"" << num(ox + ml + pw / 2) << "\" y=\"" << num(oy + 16)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
  svg << "<rect x=\"" << num(ox + ml) << "\" y=\"" << num(oy + mt) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";
  // decade and half-decade ticks inside the range, plus both ends
  std::vector<double> ticks{a, b};
  for (double e = std::ceil(a * 2.0) / 2.0; e <= b; e += 0.5) {
    if (e - a > 0.15 && b - e > 0.15) ticks.push_back(e);
  }
  std::sort(ticks.begin(), ticks.end());
  for (double e : ticks) {
    const double x = X(std::pow(10.0, e));
    char label[32];
    std::snprintf(label, sizeof label, "10^%g", std::round(e * 100.0) / 100.0);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(oy + mt + ph) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(oy + mt + ph + 4) << "\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(oy + mt + ph + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << label << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", v);
    svg << "<text x=\"" << num(ox + ml - 4) << "\" y=\"" << num(Y(v) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << num(ox + ml + pw / 2) << "\" y=\"" << num(oy + h - 4)
      << "\" text-anchor=\"middle\" font-size=\"11\">lambda</text>\n";
  for (const auto& s : series) {
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts
            << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      pts += (pts.empty() ? "" : " ") + num(X(s.x[i])) + "," + num(Y(s.y[i]));
    }
    flush();
  }
  svg << "</g>\n";
}

std::string curves_svg(const std::vector<const ModeOutcome*>& modes, double lmin, double lmax) {
  std::vector<Series> aae_s, aee_s;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    Series s{modes[k]->label, kPalette[k % std::size(kPalette)], {}, {}};
    Series e = s;
    for (const auto& r : modes[k]->rows) {
      s.x.push_back(r.lambda);
      s.y.push_back(r.aae);
      e.x.push_back(r.lambda);
      e.y.push_back(r.aee_abs);
    }
    aae_s.push_back(std::move(s));
    aee_s.push_back(std::move(e));
  }
  const double legend = 18.0 * static_cast<double>(modes.size());
  std::ostringstream svg;
  char range[96];
  std::snprintf(range, sizeof range, "data-lambda-min=\"%.6g\" data-lambda-max=\"%.6g\"", lmin, lmax);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"" << num(250 + legend) << "\" " << range
      << ">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  panel(svg, 0, 0, "AAE", aae_s, lmin, lmax);
  panel(svg, 360, 0, "AEE", aee_s, lmin, lmax);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double y = 252 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"60\" y1=\"" << num(y) << "\" x2=\"84\" y2=\"" << num(y) << "\" stroke=\"" << aae_s[k].color
        << "\" stroke-width=\"2\"/><text x=\"90\" y=\"" << num(y + 4) << "\" font-size=\"11\">" << modes[k]->label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string quiver_svg(const ModeOutcome& mode, const DisplacementField& u0, const Image& mask) {
  const Grid& g = u0.grid;
  const double cell = std::max(1.0, 512.0 / static_cast<double>(std::max(g.width, g.height)));
  const std::size_t stride = std::max<std::size_t>(1, std::max(g.width, g.height) / 24);
  const double W = cell * static_cast<double>(g.width), H = cell * static_cast<double>(g.height);
  double vmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) vmax = std::max(vmax, std::hypot(u0.ux[i], u0.uy[i]));
  if (vmax == 0.0) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      vmax = std::max(vmax, std::hypot(mode.best_flow.ux[i], mode.best_flow.uy[i]));
    }
  }
  if (vmax == 0.0) vmax = 1.0;
  const double scale = 0.9 * cell * static_cast<double>(stride) / vmax;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H + 24)
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<defs>";
  for (const char* c : {"#1f77b4", "#d62728"}) {
    svg << "<marker id=\"h" << (c + 1) << "\" viewBox=\"0 0 6 6\" refX=\"5\" refY=\"3\" markerWidth=\"4\" "
        << "markerHeight=\"4\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"" << c << "\"/></marker>";
  }
  svg << "</defs>\n";
  // support mask as horizontal runs; image row 0 is at the bottom
  svg << "<g fill=\"#dddddd\">\n";
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    const double y = (static_cast<double>(g.height - 1 - iy)) * cell;
    for (std::size_t ix = 0; ix < g.width;) {
      if (mask(ix, iy) == 0.0) {
        ++ix;
        continue;
      }
      std::size_t end = ix;
      while (end < g.width && mask(end, iy) != 0.0) ++end;
      svg << "<rect x=\"" << num(static_cast<double>(ix) * cell) << "\" y=\"" << num(y) << "\" width=\""
          << num(static_cast<double>(end - ix) * cell) << "\" height=\"" << num(cell) << "\"/>\n";
      ix = end;
    }
  }
  svg << "</g>\n";
  auto arrows = [&](const DisplacementField& u, const char* color, const char* cls) {
    svg << "<g class=\"" << cls << "\" stroke=\"" << color << "\" stroke-width=\"1.2\">\n";
    for (std::size_t iy = stride / 2; iy < g.height; iy += stride) {
      for (std::size_t ix = stride / 2; ix < g.width; ix += stride) {
        const std::size_t i = iy * g.width + ix;
        if (std::hypot(u.ux[i], u.uy[i]) * scale < 0.5) continue;
        const double x0 = (static_cast<double>(ix) + 0.5) * cell;
        const double y0 = (static_cast<double>(g.height - 1 - iy) + 0.5) * cell;
        svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + u.ux[i] * scale)
            << "\" y2=\"" << num(y0 - u.uy[i] * scale) << "\" marker-end=\"url(#h" << (color + 1) << ")\"/>\n";
      }
    }
    svg << "</g>\n";
  };
  arrows(u0, "#1f77b4", "truth");
  arrows(mode.best_flow, "#d62728", "estimate");
  char caption[160];
  std::snprintf(caption, sizeof caption, "%s, lambda = %.6g: truth (blue), estimate (red)", mode.label.c_str(),
                mode.rows.empty() ? 0.0 : mode.rows[mode.best].lambda);
  svg << "<text x=\"6\" y=\"" << num(H + 16) << "\" font-size=\"12\">" << caption << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace

std::vector<fs::path> emit_plots(const ExperimentConfig& cfg, const ExperimentResult& result,
                                 const DisplacementField& u0, const Image& mask) {
  const auto [lo, hi] = std::minmax_element(cfg.lambdas.begin(), cfg.lambdas.end());
  std::vector<fs::path> files;
  std::vector<const ModeOutcome*> done;
  for (const auto& m : result.modes) {
    if (!m.ok()) continue;
    done.push_back(&m);
    const fs::path quiver = "quiver_" + m.label + ".svg";
    save(cfg.output_dir / quiver, quiver_svg(m, u0, mask));
    files.push_back(quiver);
    const fs::path curve = "curve_" + m.label + ".svg";
    save(cfg.output_dir / curve, curves_svg({&m}, *lo, *hi));
    files.push_back(curve);
  }
  save(cfg.output_dir / "curves.svg", curves_svg(done, *lo, *hi));
  files.push_back("curves.svg");
  return files;
}

}  // namespace pae
