#ifndef HYLEAR_ROAD_LAYOUT_HPP_
#define HYLEAR_ROAD_LAYOUT_HPP_

#include <vector>

#include "hylear/geometry.hpp"

namespace hylear {

enum class CellClass : uint8_t { Free = 0, Lane = 1, Sidewalk = 2, Obstacle = 3 };

// Lane strip: drivable rectangle plus its centerline for the keep-lane rule.
struct LaneStrip {
  Rect rect;
  Vec2 center_a;
  Vec2 center_b;
};

// Static scene geometry. Obstacles are parked cars and walls; they also act
// as sight blockers for pedestrian occlusion.
struct RoadLayout {
  Aabb bounds;
  std::vector<LaneStrip> lanes;
  std::vector<Rect> sidewalks;
  std::vector<Rect> obstacles;

  // Classification priority: Obstacle > Lane > Sidewalk > Free.
  CellClass classify(const Vec2& p) const;

  double distance_to_nearest_centerline(const Vec2& p) const;

  // Unit direction from p toward the nearest lane centerline; crossing
  // pedestrians walk this way.
  Vec2 toward_road(const Vec2& p) const;
};

}  // namespace hylear

#endif  // HYLEAR_ROAD_LAYOUT_HPP_
