#include "pae/wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quadrature.hpp"
#include "wave_grid.hpp"

namespace pae {

void SolverConfig::validate(const SensorGeometry& geom) const {
  geom.validate();
  if (!(cfl > 0.0 && cfl <= 1.0 / std::sqrt(2.0))) {
    std::ostringstream os;
    os << "CFL number " << cfl << " violates 0 < cfl <= 1/sqrt(2)";
    fail(ErrorKind::invalid_argument, os.str());
  }
  require(oversampling >= 1 && oversampling <= 8, "oversampling must be between 1 and 8");
  require(padding_factor >= 0.0, "padding factor must be nonnegative");
  require(sponge_strength >= 0.0, "sponge strength must be nonnegative");
  const double t = resolved_time(geom);
  if (!(t >= 2.0 * geom.radius)) {
    std::ostringstream os;
    os << "total time " << t << " is shorter than the sensor diameter " << 2.0 * geom.radius;
    fail(ErrorKind::invalid_argument, os.str());
  }
}

namespace {

void check_support(const Image& f, const SensorGeometry& geom) {
  const Grid& g = f.grid();
  const double limit = geom.radius - g.dx;
  for (std::size_t iy = 0; iy < g.height; ++iy) {
    for (std::size_t ix = 0; ix < g.width; ++ix) {
      if (f(ix, iy) == 0.0) continue;
      const Point p = g.position(ix, iy);
      if (std::hypot(p.x - geom.center.x, p.y - geom.center.y) >= limit) {
        std::ostringstream os;
        os << "source is nonzero at (" << p.x << ", " << p.y << "), not strictly inside the sensor circle";
        fail(ErrorKind::invalid_argument, os.str());
      }
    }
  }
}

std::vector<double> sponge_profile(const detail::Lattice& lat, std::size_t cells, double strength) {
  std::vector<double> w(lat.size(), 1.0);
  if (cells == 0) return w;
  const auto n = static_cast<double>(cells);
  for (std::size_t iy = 0; iy < lat.ny; ++iy) {
    const std::size_t dy = std::min(iy, lat.ny - 1 - iy);
    for (std::size_t ix = 0; ix < lat.nx; ++ix) {
      const std::size_t dxc = std::min(ix, lat.nx - 1 - ix);
      const std::size_t edge = std::min(dxc, dy);
      if (edge >= cells) continue;
      const double depth = (n - static_cast<double>(edge)) / n;
      w[iy * lat.nx + ix] = std::exp(-strength * depth * depth);
    }
  }
  return w;
}

}  // namespace

SensorData simulate(const Image& f, const SensorGeometry& geom, const SolverConfig& cfg) {
  cfg.validate(geom);
  if (cfg.check_support) check_support(f, geom);
  const std::size_t q = cfg.oversampling;
  const double dt = cfg.cfl * f.dx();
  const double c2 = cfg.cfl * cfg.cfl;
  const auto steps = static_cast<std::size_t>(std::floor(cfg.resolved_time(geom) / dt + 1e-9)) + 1;

  const Image source = detail::upsample_cubic(f, q);
  const double h = source.dx();
  double padding = cfg.padding_factor * geom.radius;
  if (cfg.reflection_free) padding = std::max(padding, 0.5 * cfg.resolved_time(geom));
  const auto lat = detail::make_lattice(source.grid(), geom, padding + 2.0 * h, q * cfg.sponge_cells + 1);
  const auto damping = sponge_profile(lat, q * cfg.sponge_cells, cfg.sponge_strength / static_cast<double>(q));

  std::vector<detail::Bilinear> probes;
  for (std::size_t k = 0; k < geom.num_sensors; ++k) probes.push_back(detail::bilinear_stencil(lat, geom.sensor(k)));

  SensorData out(geom, dt, steps, 0);
  auto record = [&](std::size_t n, const std::vector<double>& field) {
    for (std::size_t k = 0; k < probes.size(); ++k) out.trace(k)[n] = probes[k].apply(field);
  };

  std::vector<double> prev;
  detail::load_image(lat, source, prev);
  record(0, prev);
  if (steps == 1) return out;

  // p(dt) = p(0) + dt^2/2 Laplace p(0), from p_t(0) = 0.
  std::vector<double> zero(lat.size(), 0.0);
  std::vector<double> cur(lat.size(), 0.0);
  detail::leapfrog(lat, 0.5 * c2, zero, prev, cur);
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = (cur[i] - prev[i]) * damping[i];
  if (q == 1) record(1, cur);

  const std::size_t fine_steps = (steps - 1) * q;
  for (std::size_t n = 2; n <= fine_steps; ++n) {
    detail::leapfrog(lat, c2, prev, cur, prev);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      prev[i] *= damping[i];
      cur[i] *= damping[i];
    }
    std::swap(prev, cur);
    if (n % q == 0) record(n / q, cur);
  }
  return out;
}

namespace {

// I(t) = int_0^{pi/2} int_0^{2pi} f(x + t sin(b) e_theta) t sin(b) dtheta db,
// which equals the disc integral of f(y) / sqrt(t^2 - |y - x|^2).
double disc_integral(const ScalarField& f, Point x, double t, int n_theta,
                     const detail::GaussLegendre& rule) {
  if (t <= 0.0) return 0.0;
  const double dtheta = 2.0 * kPi / n_theta;
  std::vector<double> cs(n_theta), sn(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    cs[j] = std::cos(j * dtheta);
    sn[j] = std::sin(j * dtheta);
  }
  auto ring = [&](double beta) {
    const double rho = t * std::sin(beta);
    double sum = 0.0;
    for (int j = 0; j < n_theta; ++j) sum += f(x.x + rho * cs[j], x.y + rho * sn[j]);
    return sum * dtheta * rho;
  };
  return rule.integrate(ring, 0.0, 0.5 * kPi);
}

}  // namespace

std::vector<double> wave_trace_oracle(const ScalarField& f, Point x, std::span<const double> t_samples,
                                      const OracleOptions& opts) {
  std::vector<double> out(t_samples.size(), 0.0);
  const double h = opts.derivative_step;
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double t = t_samples[i];
    require(std::isfinite(t) && t > 0.0, "wave_trace_oracle: time samples must be positive");
    int n_beta = 32;
    int n_theta = 64;
    double previous = NAN;
    bool converged = false;
    for (int level = 0; level <= opts.max_refinements; ++level) {
      const detail::GaussLegendre rule(n_beta);
      auto integral = [&](double tt) { return disc_integral(f, x, tt, n_theta, rule); };
      const double d = (-integral(t + 2 * h) + 8 * integral(t + h) - 8 * integral(t - h) + integral(t - 2 * h)) /
                       (12.0 * h);
      const double value = d / (2.0 * kPi);
      if (level > 0) {
        const double scale = std::max({std::abs(value), std::abs(previous), 1e-300});
        if (std::abs(value - previous) <= opts.tolerance * scale ||
            std::abs(value - previous) < 1e-14) {
          previous = value;
          converged = true;
          break;
        }
      }
      previous = value;
      n_beta *= 2;
      n_theta *= 2;
    }
    if (!converged) {
      std::ostringstream os;
      os << "wave_trace_oracle: quadrature did not converge at t = " << t;
      fail(ErrorKind::runtime, os.str());
    }
    out[i] = previous;
  }
  return out;
}

std::vector<double> wave_trace_oracle(const Image& f, Point x, std::span<const double> t_samples,
                                      const OracleOptions& opts) {
  const Grid& g = f.grid();
  const double x0 = g.origin.x - 0.5 * g.dx;
  const double y0 = g.origin.y - 0.5 * g.dx;
  const double x1 = g.origin.x + g.dx * (static_cast<double>(g.width) - 0.5);
  const double y1 = g.origin.y + g.dx * (static_cast<double>(g.height) - 0.5);
  ScalarField field = [&](double px, double py) {
    if (px < x0 || px > x1 || py < y0 || py > y1) return 0.0;
    return resample_bilinear(f, {px, py});
  };
  return wave_trace_oracle(field, x, t_samples, opts);
}

}  // namespace pae
