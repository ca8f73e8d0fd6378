#pragma once

// Flow validation measures. Integrals over the domain are pixel means.
// Fields compared here use the warp convention f2(x) = f1(x + u(x)).

#include <cstdint>
#include <span>
#include <vector>

#include "pae/core.hpp"

namespace pae {

/// Pixels where angle and relative errors are defined.
inline constexpr double kMagnitudeEpsilon = 1e-3;

using Mask = std::vector<std::uint8_t>;

/// 1 where |u0| >= eps.
Mask magnitude_mask(const DisplacementField& u0, double eps = kMagnitudeEpsilon);

/// Mean absolute angle difference, wrapped to [0, pi], over the mask.
double aae(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask);

/// Mean endpoint error |u - u0|; an empty span means every pixel.
double aee(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask = {});

/// Mean of |u - u0| / |u0| over the mask.
double aee_rel(const DisplacementField& u, const DisplacementField& u0, std::span<const std::uint8_t> mask);

/// Mean |f2(x) - f1(x + u(x))|; an empty span means every pixel.
double warping_error(const Image& f1, const Image& f2, const DisplacementField& u,
                     std::span<const std::uint8_t> mask = {});

}  // namespace pae
