#include <cmath>

#include "pae/bandlimit.hpp"

namespace pae {
namespace {

constexpr double kSeriesLimit = 14.0;

double j1_series(double x) {
  const double h = 0.5 * x;
  const double h2 = h * h;
  double term = h;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J1(x) = sqrt(2 / (pi x)) (P cos(x - 3pi/4) - Q sin(x - 3pi/4)), x > 0.
double j1_asymptotic(double x) {
  constexpr double mu = 4.0;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = INFINITY;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // terms alternate between Q (odd k) and P (even k) with sign (-1)^floor(k/2)
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
    if (last < 1e-17) break;
  }
  const double phase = x - 0.75 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(phase) - q * std::sin(phase));
}

}  // namespace

double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double v = ax < kSeriesLimit ? j1_series(ax) : j1_asymptotic(ax);
  return x < 0 ? -v : v;
}

}  // namespace pae
