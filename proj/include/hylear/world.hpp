#ifndef HYLEAR_WORLD_HPP_
#define HYLEAR_WORLD_HPP_

#include <deque>
#include <set>
#include <vector>

#include "hylear/config.hpp"
#include "hylear/rng.hpp"
#include "hylear/scenario.hpp"

namespace hylear {

// Longitudinal action set shared by the POMDP planner and the learner.
enum class SpeedAction : int { Accelerate = 0, Maintain = 1, Decelerate = 2, HardBrake = 3 };
constexpr int kNumSpeedActions = 4;

inline double speed_action_accel(SpeedAction a) {
  switch (a) {
    case SpeedAction::Accelerate: return 1.5;
    case SpeedAction::Maintain: return 0.0;
    case SpeedAction::Decelerate: return -1.5;
    case SpeedAction::HardBrake: return -4.0;
  }
  return 0.0;
}

struct ControlAction {
  double steering = 0.0;  // radians, clamped to steer_max
  SpeedAction speed_action = SpeedAction::Maintain;
};

struct CarState {
  Pose pose;
  double speed = 0.0;         // m/s, [0, v_max]
  double acceleration = 0.0;  // last applied longitudinal acceleration
  double steering = 0.0;
};

enum class PedIntention : int { Crossing = 0, Stopping = 1, Walking = 2 };
constexpr int kNumIntentions = 3;

struct PedestrianState {
  int id = 0;  // stable across steps; belief tracking keys on it
  Vec2 position;
  Vec2 velocity;
  PedIntention intention = PedIntention::Walking;
  std::deque<Vec2> history;  // last H positions, oldest first
  // Scripted-behavior bookkeeping (from the scenario spec).
  Vec2 walk_dir{1.0, 0.0};
  double cross_speed = 1.4;
  double crossing_distance = 7.0;
  double trigger_distance = 20.0;
  double crossed = 0.0;  // meters walked since the crossing trigger
};

struct WorldState {
  double time = 0.0;
  CarState car;
  std::vector<PedestrianState> pedestrians;
  std::vector<CarState> other_cars;
  const RoadLayout* layout = nullptr;
};

enum class EventKind : int { Crash = 0, NearMiss = 1, Goal = 2 };

Rect car_footprint(const CarState& car, const WorldParams& wp);

// Kinematic bicycle forward-Euler step. Derivatives are evaluated at the
// current state; speed integrates the action's acceleration and clamps to
// [0, v_max].
CarState step_car(const CarState& car, const ControlAction& action, double dt,
                  const WorldParams& wp);

// Scripted intention machine: walk along the sidewalk until the car is within
// trigger_distance, then cross perpendicular to the road at the scenario
// speed; stand still once crossing_distance has been covered.
PedestrianState step_pedestrian(const PedestrianState& ped, const WorldState& world, double dt,
                                Rng& rng, const WorldParams& wp);

std::set<EventKind> detect_events(const WorldState& world, const Pose& goal,
                                  const WorldParams& wp);

// Surface-to-surface distance between the car footprint and a pedestrian disc.
double car_ped_gap(const CarState& car, const PedestrianState& ped, const WorldParams& wp);

// True when the straight line of sight from the car to the point crosses a
// static obstacle rectangle.
bool is_occluded(const Vec2& car_pos, const Vec2& target, const RoadLayout& layout);

// Copy of the world without occluded pedestrians; planners and the learner
// only ever see this view.
WorldState observable_world(const WorldState& world);

WorldState initial_world(const Scenario& scenario, const RoadLayout& layout,
                         const WorldParams& wp);

// Advances the full ground-truth world by one step (car, pedestrians,
// incoming cars).
WorldState step_world(const WorldState& world, const ControlAction& action, Rng& rng,
                      const WorldParams& wp);

}  // namespace hylear

#endif  // HYLEAR_WORLD_HPP_
