#include "pae/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"

namespace pae {
namespace {

struct Derivatives {
  std::vector<double> gx, gy, gt;
};

double diff(const Image& f, std::size_t i, std::size_t n, std::size_t stride, std::size_t base, double dx) {
  // i is the coordinate along the axis, base the flat index of the pixel
  if (n < 2) return 0.0;
  if (i == 0) return (f.values()[base + stride] - f.values()[base]) / dx;
  if (i + 1 == n) return (f.values()[base] - f.values()[base - stride]) / dx;
  return (f.values()[base + stride] - f.values()[base - stride]) / (2.0 * dx);
}

Derivatives derivatives(const Image& f1, const Image& f2) {
  require(f1.grid() == f2.grid(), "horn_schunck: image grids differ");
  const Grid& g = f1.grid();
  Derivatives d;
  d.gx.resize(g.size());
  d.gy.resize(g.size());
  d.gt.resize(g.size());
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const std::size_t i = iy * g.width + ix;
      d.gx[i] = diff(f1, ix, g.width, 1, i, g.dx);
      d.gy[i] = diff(f1, iy, g.height, g.width, i, g.dx);
      d.gt[i] = f2.values()[i] - f1.values()[i];
    }
  }
  return d;
}

double energy_of(const Derivatives& d, const DisplacementField& v, double lambda) {
  const Grid& g = v.grid;
  const double area = g.dx * g.dx;
  double data = 0.0;
  double smooth = 0.0;
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const std::size_t i = iy * g.width + ix;
      const double r = d.gx[i] * v.ux[i] + d.gy[i] * v.uy[i] + d.gt[i];
      data += r * r;
      if (ix + 1 < g.width) {
        const double a = v.ux[i + 1] - v.ux[i];
        const double b = v.uy[i + 1] - v.uy[i];
        smooth += a * a + b * b;
      }
      if (iy + 1 < g.height) {
        const double a = v.ux[i + g.width] - v.ux[i];
        const double b = v.uy[i + g.width] - v.uy[i];
        smooth += a * a + b * b;
      }
    }
  }
  return area * data + lambda * smooth;
}

double residual_of(const Derivatives& d, const DisplacementField& v, double lambda) {
  const Grid& g = v.grid;
  const double area = g.dx * g.dx;
  double sum = 0.0;
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      const std::size_t i = iy * g.width + ix;
      const double r = d.gx[i] * v.ux[i] + d.gy[i] * v.uy[i] + d.gt[i];
      double lu = 0.0;
      double lv = 0.0;
      auto edge = [&](std::size_t j) {
        lu += v.ux[i] - v.ux[j];
        lv += v.uy[i] - v.uy[j];
      };
      if (ix > 0) edge(i - 1);
      if (ix + 1 < g.width) edge(i + 1);
      if (iy > 0) edge(i - g.width);
      if (iy + 1 < g.height) edge(i + g.width);
      const double eu = area * d.gx[i] * r + lambda * lu;
      const double ev = area * d.gy[i] * r + lambda * lv;
      sum += eu * eu + ev * ev;
    }
  }
  return std::sqrt(sum);
}

}  // namespace

void FlowConfig::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, "flow lambda must be positive");
  require(std::isfinite(tolerance) && tolerance > 0.0, "flow tolerance must be positive");
  require(max_iterations > 0, "flow max_iterations must be positive");
  require(relaxation == 0.0 || (relaxation > 0.0 && relaxation < 2.0),
          "flow relaxation must lie in (0, 2), or be 0 for automatic");
}

double flow_energy(const Image& f1, const Image& f2, const DisplacementField& v, double lambda) {
  require(v.grid == f1.grid(), "flow_energy: field grid differs from image grid");
  return energy_of(derivatives(f1, f2), v, lambda);
}

double flow_residual(const Image& f1, const Image& f2, const DisplacementField& v, double lambda) {
  require(v.grid == f1.grid(), "flow_residual: field grid differs from image grid");
  return residual_of(derivatives(f1, f2), v, lambda);
}

FlowResult horn_schunck(const Image& f1, const Image& f2, const FlowConfig& cfg) {
  cfg.validate();
  const Derivatives d = derivatives(f1, f2);
  const Grid& g = f1.grid();
  const double area = g.dx * g.dx;
  const double lambda = cfg.lambda;
  const double omega =
      cfg.relaxation > 0.0
          ? cfg.relaxation
          : 2.0 / (1.0 + std::sin(kPi / static_cast<double>(std::max<std::size_t>(2, std::max(g.width, g.height)))));

  FlowResult res;
  res.flow = DisplacementField(g);
  auto& u = res.flow.ux;
  auto& v = res.flow.uy;

  const double r0 = residual_of(d, res.flow, lambda);
  if (cfg.record_energy) res.energy_history.push_back(energy_of(d, res.flow, lambda));
  if (r0 == 0.0) {
    res.converged = true;
    res.energy = energy_of(d, res.flow, lambda);
    return res;
  }

  const std::size_t w = g.width;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    double update = 0.0;
    double norm = 0.0;
    for (std::size_t iy = 0; iy < g.height; ++iy) {
      for (std::size_t ix = 0; ix < w; ++ix) {
        const std::size_t i = iy * w + ix;
        double su = 0.0;
        double sv = 0.0;
        double n = 0.0;
        if (ix > 0) { su += u[i - 1]; sv += v[i - 1]; n += 1.0; }
        if (ix + 1 < w) { su += u[i + 1]; sv += v[i + 1]; n += 1.0; }
        if (iy > 0) { su += u[i - w]; sv += v[i - w]; n += 1.0; }
        if (iy + 1 < g.height) { su += u[i + w]; sv += v[i + w]; n += 1.0; }
        if (n == 0.0) {
          // single-pixel image: pure least squares on the data term
          const double gg = d.gx[i] * d.gx[i] + d.gy[i] * d.gy[i];
          if (gg > 0.0) {
            u[i] = -d.gx[i] * d.gt[i] / gg;
            v[i] = -d.gy[i] * d.gt[i] / gg;
          }
          continue;
        }
        const double ubar = su / n;
        const double vbar = sv / n;
        // exact minimizer of the energy in (u_i, v_i) with neighbours fixed
        const double t = area * (d.gx[i] * ubar + d.gy[i] * vbar + d.gt[i]) /
                         (lambda * n + area * (d.gx[i] * d.gx[i] + d.gy[i] * d.gy[i]));
        const double du = omega * (ubar - d.gx[i] * t - u[i]);
        const double dv = omega * (vbar - d.gy[i] * t - v[i]);
        u[i] += du;
        v[i] += dv;
        update += du * du + dv * dv;
        norm += u[i] * u[i] + v[i] * v[i];
      }
    }
    res.iterations = it + 1;
    if (cfg.record_energy) res.energy_history.push_back(energy_of(d, res.flow, lambda));
    const double rel_update = norm > 0.0 ? std::sqrt(update / norm) : 0.0;
    if (rel_update <= cfg.tolerance) {
      res.residual_ratio = residual_of(d, res.flow, lambda) / r0;
      if (res.residual_ratio <= cfg.tolerance) {
        res.converged = true;
        break;
      }
    }
  }
  if (!res.converged) res.residual_ratio = residual_of(d, res.flow, lambda) / r0;
  res.energy = energy_of(d, res.flow, lambda);
  return res;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(std::pow(10.0, 0.5 + 0.1 * k));
  return out;
}

std::vector<FlowResult> lambda_sweep(const Image& f1, const Image& f2, const std::vector<double>& lambdas,
                                     const FlowConfig& cfg) {
  require(!lambdas.empty(), "lambda_sweep: lambda list is empty");
  for (double l : lambdas) require(std::isfinite(l) && l > 0.0, "lambda_sweep: lambdas must be positive");
  std::vector<FlowResult> out(lambdas.size());
  detail::parallel_for(lambdas.size(), [&](std::size_t k) {
    FlowConfig c = cfg;
    c.lambda = lambdas[k];
    out[k] = horn_schunck(f1, f2, c);
  });
  return out;
}

DisplacementField to_warp_convention(const DisplacementField& v) {
  DisplacementField u = v;
  for (double& x : u.ux) x = -x;
  for (double& y : u.uy) y = -y;
  return u;
}

}  // namespace pae
