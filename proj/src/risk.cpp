#include "hylear/risk.hpp"

#include <cmath>

namespace hylear {

std::vector<Hazard> collect_hazards(const WorldState& obs, const RoadLayout& layout,
                                    const PredictedOccupancy* pred, const Vec2& eval_point,
                                    const RiskParams& rp) {
  std::vector<Hazard> hazards;
  for (const auto& ped : obs.pedestrians) {
    hazards.push_back({ped.position, rp.ped_weight});
  }
  if (pred) {
    // Predicted discs contribute with their hypothesis weight; only the
    // mid-horizon step is used to keep the hazard set small.
    const int t = pred->horizon_steps / 2;
    if (t < static_cast<int>(pred->steps.size())) {
      for (const auto& d : pred->steps[t]) {
        hazards.push_back({d.center, rp.ped_weight * d.weight});
      }
    }
  }
  for (const auto& ob : layout.obstacles) {
    // Closest point of the rectangle to the evaluation point.
    const Vec2 local = ob.to_local(eval_point);
    const Vec2 clamped{std::clamp(local.x, -ob.half_length, ob.half_length),
                       std::clamp(local.y, -ob.half_width, ob.half_width)};
    const double c = std::cos(ob.heading), s = std::sin(ob.heading);
    const Vec2 world{ob.center.x + clamped.x * c - clamped.y * s,
                     ob.center.y + clamped.x * s + clamped.y * c};
    hazards.push_back({world, rp.obstacle_weight});
  }
  for (const auto& oc : obs.other_cars) {
    hazards.push_back({oc.pose.position(), rp.obstacle_weight});
  }
  return hazards;
}

double risk_at(const Pose& pose, double speed, const std::vector<Hazard>& hazards,
               const RiskParams& rp) {
  const double sigma_long = rp.sigma_long_base + rp.sigma_long_speed * std::max(speed, 0.0);
  const double sigma_lat = rp.sigma_lat;
  const double c = std::cos(pose.heading), s = std::sin(pose.heading);

  double survive = 1.0;  // product of (1 - r_h)
  for (const auto& h : hazards) {
    const double dx = h.position.x - pose.x;
    const double dy = h.position.y - pose.y;
    const double d_long = dx * c + dy * s;
    const double d_lat = -dx * s + dy * c;
    const double r = h.weight * rp.amplitude *
                     std::exp(-d_long * d_long / (2.0 * sigma_long * sigma_long) -
                              d_lat * d_lat / (2.0 * sigma_lat * sigma_lat));
    survive *= (1.0 - std::clamp(r, 0.0, 1.0));
  }
  return 1.0 - survive;
}

PathRisk path_risk(const Path& path, double speed, const std::vector<Hazard>& hazards,
                   const RiskParams& rp) {
  PathRisk out;
  out.per_pose.reserve(path.poses.size());
  double sum = 0.0;
  for (const auto& pose : path.poses) {
    const double r = risk_at(pose, speed, hazards, rp);
    out.per_pose.push_back(r);
    out.aggregate = std::max(out.aggregate, r);
    sum += r;
  }
  out.mean = path.poses.empty() ? 0.0 : sum / static_cast<double>(path.poses.size());
  out.above_threshold = out.aggregate > rp.risk_threshold;
  return out;
}

}  // namespace hylear
