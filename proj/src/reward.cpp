#include "hylear/reward.hpp"

#include <algorithm>
#include <cmath>

namespace hylear {

double path_arc_position(const Path& path, const Vec2& point) {
  if (path.poses.size() < 2) return 0.0;
  size_t nearest = 0;
  double best = 1e300;
  for (size_t k = 0; k < path.poses.size(); ++k) {
    const double d = (path.poses[k].position() - point).norm_sq();
    if (d < best) {
      best = d;
      nearest = k;
    }
  }
  // Continuous projection onto the segment after the nearest pose (or before
  // it at the path end). Poses are evenly spaced along arc length.
  const double spacing = path.length / static_cast<double>(path.poses.size() - 1);
  size_t seg = nearest < path.poses.size() - 1 ? nearest : nearest - 1;
  const Vec2 a = path.poses[seg].position();
  const Vec2 b = path.poses[seg + 1].position();
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  // The first segment projects unclamped below zero so motion toward a path
  // that starts slightly ahead of the car still counts as progress.
  const double lo = seg == 0 ? -4.0 : 0.0;
  const double t = len_sq > 0.0 ? std::clamp((point - a).dot(ab) / len_sq, lo, 1.0) : 0.0;
  return (static_cast<double>(seg) + t) * spacing;
}

double reward_terms(const std::set<EventKind>& events, double progress, double accel_change,
                    double r_min, double r_max) {
  double r = -0.1;  // time penalty
  if (events.count(EventKind::Goal)) r += 100.0;
  if (events.count(EventKind::Crash)) r -= 100.0;
  if (events.count(EventKind::NearMiss)) r -= 10.0;
  r += 1.0 * progress;
  r -= 0.5 * std::abs(accel_change);
  return std::clamp(r, r_min, r_max);
}

double reward(const WorldState& prev, const ControlAction& /*action*/, const WorldState& next,
              const std::set<EventKind>& events, const Path& selected_path, double r_min,
              double r_max) {
  const double progress = path_arc_position(selected_path, next.car.pose.position()) -
                          path_arc_position(selected_path, prev.car.pose.position());
  return reward_terms(events, progress, next.car.acceleration - prev.car.acceleration, r_min,
                      r_max);
}

}  // namespace hylear
