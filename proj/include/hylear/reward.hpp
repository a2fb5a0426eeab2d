#ifndef HYLEAR_REWARD_HPP_
#define HYLEAR_REWARD_HPP_

#include <set>

#include "hylear/planner.hpp"
#include "hylear/world.hpp"

namespace hylear {

// Shared step reward for the POMDP planner and the learner:
//   +100 goal, -100 crash, -10 near-miss, -0.1 per step,
//   +1.0 per meter of progress along the selected path,
//   -0.5 * |acceleration change| (jerk proxy); clamped to [r_min, r_max].
double reward(const WorldState& prev, const ControlAction& action, const WorldState& next,
              const std::set<EventKind>& events, const Path& selected_path, double r_min,
              double r_max);

// Same formula with progress and acceleration change precomputed; the rollout
// hot path uses this to avoid path scans.
double reward_terms(const std::set<EventKind>& events, double progress, double accel_change,
                    double r_min, double r_max);

// Arc-length progress helper: nearest-pose arc position on the path.
double path_arc_position(const Path& path, const Vec2& point);

}  // namespace hylear

#endif  // HYLEAR_REWARD_HPP_
