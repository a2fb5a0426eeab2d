#include "hylear/world.hpp"

#include <algorithm>
#include <cmath>

namespace hylear {

Rect car_footprint(const CarState& car, const WorldParams& wp) {
  return Rect{{car.pose.x, car.pose.y}, wp.car_length / 2.0, wp.car_width / 2.0,
              car.pose.heading};
}

CarState step_car(const CarState& car, const ControlAction& action, double dt,
                  const WorldParams& wp) {
  CarState next = car;
  const double steering = std::clamp(action.steering, -wp.steer_max, wp.steer_max);
  const double accel = speed_action_accel(action.speed_action);
  const double v = car.speed;

  next.pose.x = car.pose.x + v * std::cos(car.pose.heading) * dt;
  next.pose.y = car.pose.y + v * std::sin(car.pose.heading) * dt;
  next.pose.heading =
      normalize_angle(car.pose.heading + v / wp.wheelbase * std::tan(steering) * dt);
  next.speed = std::clamp(v + accel * dt, 0.0, wp.v_max);
  next.acceleration = (next.speed - v) / dt;  // effective, accounts for clamping
  next.steering = steering;
  return next;
}

PedestrianState step_pedestrian(const PedestrianState& ped, const WorldState& world, double dt,
                                Rng& rng, const WorldParams& wp) {
  PedestrianState next = ped;
  const Vec2 car_pos = world.car.pose.position();

  if (next.intention == PedIntention::Walking) {
    const double dist_to_car = (car_pos - next.position).norm();
    if (dist_to_car <= next.trigger_distance) {
      next.intention = PedIntention::Crossing;
      next.crossed = 0.0;
    }
  }

  Vec2 vel{0.0, 0.0};
  switch (next.intention) {
    case PedIntention::Walking:
      vel = next.walk_dir * std::min(next.cross_speed, wp.ped_v_max);
      break;
    case PedIntention::Crossing: {
      const Vec2 dir = world.layout ? world.layout->toward_road(next.position) : Vec2{0.0, 1.0};
      vel = dir * std::min(next.cross_speed, wp.ped_v_max);
      break;
    }
    case PedIntention::Stopping:
      vel = {0.0, 0.0};
      break;
  }
  if (wp.ped_noise_sigma > 0.0) {
    vel.x += rng.gaussian(0.0, wp.ped_noise_sigma);
    vel.y += rng.gaussian(0.0, wp.ped_noise_sigma);
  }
  const double speed = vel.norm();
  if (speed > wp.ped_v_max) vel = vel * (wp.ped_v_max / speed);

  next.velocity = vel;
  next.position = next.position + vel * dt;
  if (next.intention == PedIntention::Crossing) {
    next.crossed += vel.norm() * dt;
    if (next.crossed >= next.crossing_distance) next.intention = PedIntention::Stopping;
  }
  next.history.push_back(next.position);
  while (static_cast<int>(next.history.size()) > wp.ped_history) next.history.pop_front();
  return next;
}

double car_ped_gap(const CarState& car, const PedestrianState& ped, const WorldParams& wp) {
  const Rect fp = car_footprint(car, wp);
  return std::max(0.0, fp.distance_to(ped.position) - wp.ped_radius);
}

std::set<EventKind> detect_events(const WorldState& world, const Pose& goal,
                                  const WorldParams& wp) {
  std::set<EventKind> events;
  const Rect fp = car_footprint(world.car, wp);

  bool contact = false;
  for (const auto& ped : world.pedestrians) {
    if (fp.distance_to(ped.position) <= wp.ped_radius) {
      contact = true;
      break;
    }
  }
  if (!contact && world.layout) {
    for (const auto& ob : world.layout->obstacles) {
      if (rects_overlap(fp, ob)) {
        contact = true;
        break;
      }
    }
  }
  if (!contact) {
    for (const auto& oc : world.other_cars) {
      if (rects_overlap(fp, car_footprint(oc, wp))) {
        contact = true;
        break;
      }
    }
  }
  if (contact) events.insert(EventKind::Crash);

  if (!contact && world.car.speed > wp.v_near) {
    for (const auto& ped : world.pedestrians) {
      const double gap = std::max(0.0, fp.distance_to(ped.position) - wp.ped_radius);
      if (gap < wp.d_near) {
        events.insert(EventKind::NearMiss);
        break;
      }
    }
  }

  const double goal_dist = (world.car.pose.position() - goal.position()).norm();
  if (goal_dist <= wp.goal_radius) events.insert(EventKind::Goal);
  return events;
}

bool is_occluded(const Vec2& car_pos, const Vec2& target, const RoadLayout& layout) {
  for (const auto& ob : layout.obstacles) {
    if (segment_intersects_rect(car_pos, target, ob)) return true;
  }
  return false;
}

WorldState observable_world(const WorldState& world) {
  WorldState obs = world;
  if (!world.layout) return obs;
  obs.pedestrians.clear();
  const Vec2 car_pos = world.car.pose.position();
  for (const auto& ped : world.pedestrians) {
    if (!is_occluded(car_pos, ped.position, *world.layout)) {
      obs.pedestrians.push_back(ped);
    }
  }
  return obs;
}

WorldState initial_world(const Scenario& scenario, const RoadLayout& layout,
                         const WorldParams& wp) {
  WorldState w;
  w.time = 0.0;
  w.layout = &layout;
  w.car.pose = scenario.car_start;
  w.car.speed = 0.0;
  for (const auto& spec : scenario.peds) {
    PedestrianState p;
    p.id = static_cast<int>(w.pedestrians.size());
    p.position = spec.spawn;
    p.walk_dir = spec.walk_dir;
    p.cross_speed = spec.speed;
    p.crossing_distance = spec.crossing_distance;
    p.trigger_distance = spec.trigger_distance;
    p.intention = PedIntention::Walking;
    p.velocity = spec.walk_dir * std::min(spec.speed, wp.ped_v_max);
    p.history.push_back(p.position);
    w.pedestrians.push_back(std::move(p));
  }
  if (scenario.incoming_car) {
    CarState oc;
    oc.pose = scenario.incoming_car->start;
    oc.speed = scenario.incoming_car->speed;
    w.other_cars.push_back(oc);
  }
  return w;
}

WorldState step_world(const WorldState& world, const ControlAction& action, Rng& rng,
                      const WorldParams& wp) {
  WorldState next = world;
  next.time = world.time + wp.dt;
  next.car = step_car(world.car, action, wp.dt, wp);
  for (size_t i = 0; i < world.pedestrians.size(); ++i) {
    next.pedestrians[i] = step_pedestrian(world.pedestrians[i], world, wp.dt, rng, wp);
  }
  // Incoming cars are constant-speed lane followers.
  for (auto& oc : next.other_cars) {
    oc.pose.x += oc.speed * std::cos(oc.pose.heading) * wp.dt;
    oc.pose.y += oc.speed * std::sin(oc.pose.heading) * wp.dt;
  }
  return next;
}

}  // namespace hylear
