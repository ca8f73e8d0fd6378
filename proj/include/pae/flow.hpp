#pragma once

// Horn-Schunck optical flow between two images.
//
// The estimated field v minimizes
//   sum_x (grad f1 . v + (f2 - f1))^2 dx^2 + lambda * sum_edges |v_i - v_j|^2
// over 4-neighbour edges, which is the discrete form of
//   ||grad f1 . v + f_t||^2 + lambda * int |grad v|^2
// with natural (homogeneous Neumann) boundary conditions. The data term
// linearizes f2(x) ~ f1(x - v(x)), so v is the forward motion of the image
// content. See to_warp_convention for the field u with f2(x) = f1(x + u(x)).

#include <vector>

#include "pae/core.hpp"

namespace pae {

struct FlowConfig {
  double lambda = 10.0;
  std::size_t max_iterations = 10000;
  /// Stop when the relative update norm and the Euler-Lagrange residual
  /// (relative to its value at v = 0) both fall below this.
  double tolerance = 1e-6;
  /// Successive over-relaxation factor in (0, 2); 1 is plain Gauss-Seidel.
  /// 0 picks 2 / (1 + sin(pi / n)) for the larger image side n, the optimal
  /// factor of the Laplacian that dominates in flat image regions.
  double relaxation = 0.0;
  bool record_energy = false;

  void validate() const;
};

struct FlowResult {
  DisplacementField flow;
  double energy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual_ratio = 0.0;
  std::vector<double> energy_history;  // filled when record_energy is set
};

FlowResult horn_schunck(const Image& f1, const Image& f2, const FlowConfig& cfg);

/// Discrete Horn-Schunck energy of a candidate field.
double flow_energy(const Image& f1, const Image& f2, const DisplacementField& v, double lambda);
/// L2 norm of the Euler-Lagrange residual (half the energy gradient).
double flow_residual(const Image& f1, const Image& f2, const DisplacementField& v, double lambda);

/// 21 log-spaced values 10^0.5 ... 10^2.5.
std::vector<double> default_lambda_grid();

/// One solve per lambda, in input order. Runs the lambdas in parallel.
std::vector<FlowResult> lambda_sweep(const Image& f1, const Image& f2, const std::vector<double>& lambdas,
                                     const FlowConfig& cfg);

/// Negates a motion field so that f2(x) ~ f1(x + u(x)).
DisplacementField to_warp_convention(const DisplacementField& v);

}  // namespace pae
