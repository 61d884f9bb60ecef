#include "mapof/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mapof/errors.hpp"

namespace mapof {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCollinearTol = 1e-12;

int sign(double v) { return (v > 0.0) - (v < 0.0); }

Vec2 on_circle(const Vec2& center, double radius, double angle) {
  return center + Vec2{radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

Mode mode_from_int(int value) {
  if (value < 1 || value > 4) {
    throw std::invalid_argument("mode out of range: " + std::to_string(value));
  }
  return static_cast<Mode>(value);
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Attraction:
      return "attraction";
    case Mode::AvoidA:
      return "avoid-a";
    case Mode::AvoidB:
      return "avoid-b";
    case Mode::Repulsion:
      return "repulsion";
  }
  return "unknown";
}

Vec2 rotate(const Vec2& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

PartitionMap build_partition(const Vec2& target, const Vec2& obstacle, double r_m, double r_d, double d_g) {
  if (!(r_m > 0.0) || !(r_d > r_m)) {
    throw GeometryError("partition needs r_d > r_m > 0");
  }
  if (!(d_g > r_m)) {
    throw GeometryError("virtual target distance d_g must exceed r_m");
  }
  const Vec2 offset = target - obstacle;
  const double dist = norm(offset);
  if (!(dist > r_m)) {
    throw GeometryError("target lies inside the security zone of the obstacle");
  }

  PartitionMap pm;
  pm.obstacle = obstacle;
  pm.target = target;
  pm.r_m = r_m;
  pm.r_d = r_d;

  double mu = std::atan2(offset.y, offset.x);
  if (mu < 0.0) mu += kTwoPi;
  if (mu >= kTwoPi) mu -= kTwoPi;
  pm.mu = mu;
  pm.theta = std::atan(r_m / dist);

  const double half_pi = std::numbers::pi / 2.0;
  pm.p1 = on_circle(obstacle, r_m, mu + half_pi);
  pm.p2 = on_circle(obstacle, r_m, mu - half_pi);
  // (r_m cos theta, +/- r_m sin theta) expressed in the obstacle->target frame.
  pm.pc1 = obstacle + rotate({r_m * std::cos(pm.theta), r_m * std::sin(pm.theta)}, mu);
  pm.pc2 = obstacle + rotate({r_m * std::cos(pm.theta), -r_m * std::sin(pm.theta)}, mu);
  pm.g1 = obstacle + (pm.p1 - obstacle) * (d_g / r_m);
  pm.g2 = obstacle + (pm.p2 - obstacle) * (d_g / r_m);
  return pm;
}

bool sector_contains(const Vec2& z_c, const Vec2& z1, const Vec2& z2, const Vec2& z3) {
  const Vec2 u1 = z1 - z3;
  const Vec2 u2 = z2 - z3;
  const Vec2 w = z_c - z3;
  const double span = cross(u1, u2);
  if (std::abs(span) < kCollinearTol) {
    throw DegenerateSectorError("sector rays are collinear");
  }
  const int s1 = sign(cross(u1, w));
  const int s2 = sign(cross(u2, w));
  return s1 != 0 && s2 != 0 && s1 == sign(span) && s2 == -sign(span);
}

namespace {

bool in_avoidance_wedge(const Vec2& xi, const Vec2& pc, const PartitionMap& pm) {
  const Vec2& zeta = pm.obstacle;
  const Vec2& eta = pm.target;
  return sector_contains(xi, pc, zeta, eta) &&
         sector_contains(xi - zeta, -(eta - zeta), pc - zeta, Vec2{0.0, 0.0});
}

}  // namespace

Mode classify_region(const Vec2& xi, const PartitionMap& pm) {
  const double d_obstacle = distance(xi, pm.obstacle);
  if (d_obstacle < pm.r_m) return Mode::Repulsion;

  // Detection of the obstacle by the vehicle gates both avoidance modes.
  const bool eligible = distance(pm.target, pm.obstacle) > pm.r_m && d_obstacle < pm.r_d;
  if (!eligible) return Mode::Attraction;

  // Each wedge attracts towards the virtual target on its own side.
  if (in_avoidance_wedge(xi, pm.pc2, pm)) return Mode::AvoidB;
  if (in_avoidance_wedge(xi, pm.pc1, pm)) return Mode::AvoidA;
  return Mode::Attraction;
}

}  // namespace mapof
