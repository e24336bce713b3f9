#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace evigrid {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, world frame
};

enum class SurfaceMaterial { smooth, glass };

struct WallSegment {
  Vec2 a;
  Vec2 b;
  SurfaceMaterial material = SurfaceMaterial::smooth;
};

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  return std::remainder(a, 2.0 * M_PI);
}

struct RaySegmentHit {
  double distance = 0.0;      // along the ray, ray direction assumed unit
  double along = 0.0;         // segment parameter in [0, 1]
  Vec2 point;
  Vec2 normal;                // unit normal facing the ray origin
  std::size_t segment_index = 0;
};

// Nearest intersection of a ray with a set of segments; `skip` (if not
// npos) excludes one segment, used when continuing through a surface.
std::optional<RaySegmentHit> intersect_ray(
    const Vec2& origin, const Vec2& direction,
    std::span<const WallSegment> segments,
    std::size_t skip = static_cast<std::size_t>(-1));

// Even-odd point-in-polygon test over the segment loop's vertices.
bool point_in_polygon(const Vec2& p, std::span<const WallSegment> loop);

// True when the segment and the axis-aligned rectangle overlap
// (Liang-Barsky clip of the segment's parameter interval).
bool segment_intersects_rect(const Vec2& a, const Vec2& b, double min_x,
                             double min_y, double max_x, double max_y);

// True when consecutive segments share endpoints and the loop closes.
bool is_closed_loop(std::span<const WallSegment> loop, double eps = 1e-9);

// Twice the signed area of the loop's vertex polygon.
double loop_signed_area2(std::span<const WallSegment> loop);

}  // namespace evigrid
