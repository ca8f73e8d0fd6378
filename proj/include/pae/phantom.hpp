#pragma once

// Synthetic sources, ground-truth displacement fields and image warping.

#include <cstdint>
#include <optional>

#include "pae/core.hpp"

namespace pae {

enum class PhantomKind { disc, annulus, branching_tree };

struct PhantomSpec {
  PhantomKind kind = PhantomKind::disc;
  Grid grid{};
  double amplitude = 1.0;

  // disc / annulus
  Point center{};
  double radius = 0.0;
  double inner_radius = 0.0;

  // branching_tree: the trunk starts at `center` and grows along `direction`
  // (radians). Every level splits into two children rotated by
  // +-branch_angle, scaled by length_ratio / width_ratio, with seeded jitter.
  int depth = 0;
  double trunk_length = 0.0;
  double trunk_width = 0.0;
  double direction = kPi / 2;
  double branch_angle = 0.5;
  double length_ratio = 0.7;
  double width_ratio = 0.7;
  double jitter = 0.15;
  std::uint64_t seed = 1;

  // When set, the support must stay within 90% of this circle's radius.
  std::optional<SensorGeometry> enclosing;
};

enum class DeformationKind { rigid_translation, rigid_rotation, nonrigid_bump };

struct DeformationSpec {
  DeformationKind kind = DeformationKind::rigid_translation;
  Point shift{};            // rigid_translation
  double angle = 0.0;       // rigid_rotation, radians
  Point pivot{};            // rigid_rotation
  Point bump_center{};      // nonrigid_bump
  double bump_sigma = 1.0;  // nonrigid_bump
  double bump_amplitude = 0.0;
  double bump_direction = 0.0;  // angle of the unit direction d

  /// Displacements are capped at this many pixels.
  static constexpr double kMaxPixels = 5.0;
};

Image make_phantom(const PhantomSpec& spec);

/// Fields are in world length units on `grid`; |u| <= 5 dx is enforced.
DisplacementField make_displacement(const DeformationSpec& spec, const Grid& grid);

/// f2(x) = f1(x + u(x)) by bilinear resampling.
Image warp_image(const Image& f1, const DisplacementField& u);

/// f + alpha * r with r i.i.d. standard normal, reproducible from `seed`.
Image add_gaussian_texture(const Image& f, double alpha, std::uint64_t seed);

/// Pixels where the phantom is nonzero (1) or zero (0).
Image support_mask(const Image& f);

}  // namespace pae
