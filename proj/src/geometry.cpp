#include "evigrid/geometry.hpp"

#include <algorithm>

namespace evigrid {

std::optional<RaySegmentHit> intersect_ray(
    const Vec2& origin, const Vec2& direction,
    std::span<const WallSegment> segments, std::size_t skip) {
  std::optional<RaySegmentHit> best;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i == skip) continue;
    const WallSegment& s = segments[i];
    const Vec2 e = s.b - s.a;
    const double denom = direction.x * e.y - direction.y * e.x;
    if (std::abs(denom) < 1e-15) continue;  // parallel
    const Vec2 q = s.a - origin;
    const double t = (q.x * e.y - q.y * e.x) / denom;
    const double u = (q.x * direction.y - q.y * direction.x) / denom;
    if (t <= 1e-9 || u < 0.0 || u > 1.0) continue;
    if (!best || t < best->distance) {
      RaySegmentHit hit;
      hit.distance = t;
      hit.along = u;
      hit.point = origin + direction * t;
      Vec2 n{-e.y, e.x};
      const double len = n.norm();
      if (len == 0.0) continue;
      n = n * (1.0 / len);
      if (n.dot(direction) > 0.0) n = n * -1.0;  // face the origin side
      hit.normal = n;
      hit.segment_index = i;
      best = hit;
    }
  }
  return best;
}

bool point_in_polygon(const Vec2& p, std::span<const WallSegment> loop) {
  bool inside = false;
  for (const WallSegment& s : loop) {
    const double yi = s.a.y, yj = s.b.y;
    if ((yi > p.y) != (yj > p.y)) {
      const double x_cross =
          (s.b.x - s.a.x) * (p.y - yi) / (yj - yi) + s.a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool segment_intersects_rect(const Vec2& a, const Vec2& b, double min_x,
                             double min_y, double max_x, double max_y) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - min_x, max_x - a.x, a.y - min_y, max_y - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;  // parallel and outside the slab
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

bool is_closed_loop(std::span<const WallSegment> loop, double eps) {
  if (loop.size() < 3) return false;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec2& end = loop[i].b;
    const Vec2& next = loop[(i + 1) % loop.size()].a;
    if (std::abs(end.x - next.x) > eps || std::abs(end.y - next.y) > eps) {
      return false;
    }
  }
  return true;
}

double loop_signed_area2(std::span<const WallSegment> loop) {
  double acc = 0.0;
  for (const WallSegment& s : loop) {
    acc += s.a.x * s.b.y - s.b.x * s.a.y;
  }
  return acc;
}

}  // namespace evigrid
