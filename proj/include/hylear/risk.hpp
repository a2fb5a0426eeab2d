#ifndef HYLEAR_RISK_HPP_
#define HYLEAR_RISK_HPP_

#include <vector>

#include "hylear/costmap.hpp"
#include "hylear/planner.hpp"

namespace hylear {

// A point hazard with a combination weight (pedestrian, predicted disc with
// its hypothesis weight, or the closest point of an obstacle).
struct Hazard {
  Vec2 position;
  double weight = 1.0;
};

// Collects observed pedestrians, predicted discs and static obstacles into
// weighted hazards for a given evaluation pose.
std::vector<Hazard> collect_hazards(const WorldState& obs, const RoadLayout& layout,
                                    const PredictedOccupancy* pred, const Vec2& eval_point,
                                    const RiskParams& rp);

// Anisotropic Gaussian field in the heading frame, combined across hazards by
// noisy-or; always in [0, 1]. The longitudinal spread grows with speed.
double risk_at(const Pose& pose, double speed, const std::vector<Hazard>& hazards,
               const RiskParams& rp);

struct PathRisk {
  std::vector<double> per_pose;
  double aggregate = 0.0;       // max over poses
  double mean = 0.0;            // used by the comfort metric
  bool above_threshold = false; // strict > risk_threshold
};

PathRisk path_risk(const Path& path, double speed, const std::vector<Hazard>& hazards,
                   const RiskParams& rp);

}  // namespace hylear

#endif  // HYLEAR_RISK_HPP_
