#include "hylear/belief.hpp"

#include <cmath>

namespace hylear {

Belief initial_belief(const RoadLayout& layout, const PomdpParams& pp) {
  Belief b;
  b.phantom_priors.assign(layout.obstacles.size(), pp.phantom_prior);
  return b;
}

Vec2 intention_velocity(PedIntention intention, const Vec2& position, const Vec2& velocity,
                        const RoadLayout& layout, const PomdpParams& pp) {
  const double observed_speed = velocity.norm();
  const double speed = observed_speed > 0.3 ? observed_speed : pp.ped_nominal_speed;
  switch (intention) {
    case PedIntention::Crossing:
      return layout.toward_road(position) * speed;
    case PedIntention::Stopping:
      return {0.0, 0.0};
    case PedIntention::Walking: {
      if (observed_speed > 0.3) return velocity;
      return {0.0, 0.0};  // standing pedestrian keeps standing under Walking
    }
  }
  return {0.0, 0.0};
}

Belief update_belief(const Belief& belief, const ControlAction& /*action*/,
                     const WorldState& observation, const RoadLayout& layout, double dt,
                     const PomdpParams& pp) {
  Belief next = belief;

  std::set<int> seen_ids;
  for (const auto& ped : observation.pedestrians) {
    seen_ids.insert(ped.id);
    auto it = next.peds.find(ped.id);
    if (it == next.peds.end()) {
      PedBelief nb;
      nb.last_position = ped.position;
      nb.last_velocity = ped.velocity;
      nb.seen = true;
      next.peds[ped.id] = nb;
      continue;
    }
    PedBelief& pb = it->second;
    const Vec2 disp = ped.position - pb.last_position;
    const double two_var = 2.0 * pp.sigma_obs * pp.sigma_obs;
    double total = 0.0;
    std::array<double, kNumIntentions> post{};
    for (int k = 0; k < kNumIntentions; ++k) {
      const Vec2 pred = intention_velocity(static_cast<PedIntention>(k), pb.last_position,
                                           pb.last_velocity, layout, pp) *
                        dt;
      const Vec2 err = disp - pred;
      const double lik = std::exp(-(err.x * err.x + err.y * err.y) / two_var);
      post[k] = pb.p[k] * lik;
      total += post[k];
    }
    if (total <= 0.0) {
      post = pb.p;  // zero-information observation keeps the prior
      total = post[0] + post[1] + post[2];
    }
    double renorm = 0.0;
    for (int k = 0; k < kNumIntentions; ++k) {
      post[k] = std::max(post[k] / total, pp.belief_floor);
      renorm += post[k];
    }
    for (int k = 0; k < kNumIntentions; ++k) pb.p[k] = post[k] / renorm;
    pb.last_position = ped.position;
    pb.last_velocity = ped.velocity;
    pb.seen = true;
  }

  // Occluded pedestrians drift toward uniform.
  for (auto& [id, pb] : next.peds) {
    if (seen_ids.count(id)) continue;
    pb.seen = false;
    for (int k = 0; k < kNumIntentions; ++k) {
      pb.p[k] = (1.0 - pp.occluded_mix) * pb.p[k] + pp.occluded_mix / kNumIntentions;
    }
    // Dead-reckon the hidden pedestrian under its most likely intention.
    int arg = 0;
    for (int k = 1; k < kNumIntentions; ++k) {
      if (pb.p[k] > pb.p[arg]) arg = k;
    }
    const Vec2 vel = intention_velocity(static_cast<PedIntention>(arg), pb.last_position,
                                        pb.last_velocity, layout, pp);
    pb.last_position = pb.last_position + vel * dt;
  }
  return next;
}

}  // namespace hylear
