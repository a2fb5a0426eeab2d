#include "hylear/road_layout.hpp"

#include <algorithm>

namespace hylear {

CellClass RoadLayout::classify(const Vec2& p) const {
  for (const auto& r : obstacles) {
    if (r.contains(p)) return CellClass::Obstacle;
  }
  for (const auto& l : lanes) {
    if (l.rect.contains(p)) return CellClass::Lane;
  }
  for (const auto& r : sidewalks) {
    if (r.contains(p)) return CellClass::Sidewalk;
  }
  return CellClass::Free;
}

double RoadLayout::distance_to_nearest_centerline(const Vec2& p) const {
  double best = 1e300;
  for (const auto& l : lanes) {
    best = std::min(best, segment_point_distance(l.center_a, l.center_b, p));
  }
  return best;
}

Vec2 RoadLayout::toward_road(const Vec2& p) const {
  double best = 1e300;
  Vec2 target = p;
  for (const auto& l : lanes) {
    const Vec2 ab = l.center_b - l.center_a;
    const double len_sq = ab.norm_sq();
    const double t = len_sq > 0.0 ? std::clamp((p - l.center_a).dot(ab) / len_sq, 0.0, 1.0) : 0.0;
    const Vec2 proj = l.center_a + ab * t;
    const double d = (p - proj).norm();
    if (d < best) {
      best = d;
      target = proj;
    }
  }
  Vec2 dir = target - p;
  const double n = dir.norm();
  if (n < 1e-9) return {0.0, -1.0};
  return dir * (1.0 / n);
}

}  // namespace hylear
