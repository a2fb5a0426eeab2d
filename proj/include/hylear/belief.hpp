#ifndef HYLEAR_BELIEF_HPP_
#define HYLEAR_BELIEF_HPP_

#include <array>
#include <map>

#include "hylear/world.hpp"

namespace hylear {

// Per-pedestrian intention distribution plus the last observation used for
// the displacement likelihood.
struct PedBelief {
  std::array<double, kNumIntentions> p{1.0 / 3, 1.0 / 3, 1.0 / 3};
  Vec2 last_position;
  Vec2 last_velocity;
  bool seen = false;
};

struct Belief {
  std::map<int, PedBelief> peds;        // keyed by pedestrian id
  std::vector<double> phantom_priors;   // per layout occluder
};

Belief initial_belief(const RoadLayout& layout, const PomdpParams& pp);

// Expected displacement of a pedestrian under one intention model over dt.
Vec2 intention_velocity(PedIntention intention, const Vec2& position, const Vec2& velocity,
                        const RoadLayout& layout, const PomdpParams& pp);

// Bayes filter: weight each intention by the Gaussian likelihood of the
// observed displacement under its motion model, floor at belief_floor and
// renormalize. Unseen pedestrians mix toward uniform at rate occluded_mix.
Belief update_belief(const Belief& belief, const ControlAction& action,
                     const WorldState& observation, const RoadLayout& layout, double dt,
                     const PomdpParams& pp);

}  // namespace hylear

#endif  // HYLEAR_BELIEF_HPP_
