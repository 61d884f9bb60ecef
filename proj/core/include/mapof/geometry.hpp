#pragma once

#include <string_view>

#include "mapof/vec2.hpp"

namespace mapof {

/// Active potential function. Numbering follows the partition subregions.
enum class Mode : int {
  Attraction = 1,
  AvoidA = 2,  // attracted to the virtual target g1 (p1 side)
  AvoidB = 3,  // attracted to the virtual target g2 (p2 side)
  Repulsion = 4,
};

constexpr int to_int(Mode m) { return static_cast<int>(m); }
constexpr bool is_stable(Mode m) { return m != Mode::Repulsion; }

/// Throws std::invalid_argument outside 1..4.
Mode mode_from_int(int value);
std::string_view mode_name(Mode m);

/// Counter-clockwise rotation of a column vector by phi radians.
Vec2 rotate(const Vec2& v, double phi);

/// Obstacle-relative partition of the plane, built once per active obstacle.
struct PartitionMap {
  Vec2 obstacle;    // zeta
  Vec2 target;      // eta
  double mu = 0.0;  // direction obstacle -> target, in [0, 2pi)
  double theta = 0.0;
  Vec2 p1, p2;    // perpendicular points on the security circle
  Vec2 pc1, pc2;  // wedge points on the security circle, pc1 on p1's side
  Vec2 g1, g2;    // virtual targets
  double r_m = 0.0;
  double r_d = 0.0;
};

/// Errors with GeometryError when the target lies within r_m of the obstacle,
/// or when the radii are inconsistent (need r_d > r_m > 0 and d_g > r_m).
PartitionMap build_partition(const Vec2& target, const Vec2& obstacle, double r_m, double r_d, double d_g);

/// True iff z_c lies strictly inside the convex cone with apex z3 spanned by
/// the rays towards z1 and z2. Boundary points are outside.
/// Throws DegenerateSectorError when the rays are collinear.
bool sector_contains(const Vec2& z_c, const Vec2& z1, const Vec2& z2, const Vec2& z3);

/// State-dependent region of xi. Cases are tested in the order 4, 3, 2, 1.
Mode classify_region(const Vec2& xi, const PartitionMap& pm);

}  // namespace mapof
