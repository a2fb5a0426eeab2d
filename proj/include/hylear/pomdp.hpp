#ifndef HYLEAR_POMDP_HPP_
#define HYLEAR_POMDP_HPP_

#include <array>
#include <cstdint>

#include "hylear/belief.hpp"
#include "hylear/planner.hpp"

namespace hylear {

struct PomdpBudget {
  int num_scenarios = 32;  // K; ignored in exhaustive mode
  int depth = 10;          // D
  int max_nodes = 20000;   // node-count budget mode
  double max_ms = 0.0;     // > 0 enables wall-clock mode
  bool exhaustive = false; // enumerate the full weighted scenario space
};

struct SpeedPlan {
  SpeedAction action = SpeedAction::HardBrake;
  std::array<double, kNumSpeedActions> values{};
  int completed_depth = 0;
  int nodes = 0;
};

// Everything the determinized rollouts need besides the belief.
struct PomdpContext {
  const RoadLayout* layout = nullptr;
  Pose goal;
  WorldParams world;
  PomdpParams params;
  double r_min = -100.0;
  double r_max = 100.0;
};

// Sampled-scenario anytime tree search over the four speed actions along a
// fixed path. Scenarios are determinized from the belief (intention draws,
// phantom pedestrians behind occluders, seeded noise); the tree is open-loop
// and iteratively deepened until the node budget or deadline runs out. Node
// values are scenario-weighted discounted returns; with exhaustive scenarios
// and enough budget this equals full expectimax enumeration.
SpeedPlan plan_speed(const Belief& belief, const Path& path, const CarState& car,
                     const PomdpBudget& budget, const PomdpContext& ctx, uint64_t seed);

// Invocation counter: lets tests assert the planner stays out of pure-learner
// rollouts.
uint64_t plan_speed_call_count();
void reset_plan_speed_call_count();

}  // namespace hylear

#endif  // HYLEAR_POMDP_HPP_
