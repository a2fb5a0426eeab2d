#include "hylear/pomdp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>

#include "hylear/reward.hpp"

namespace hylear {

namespace {

std::atomic<uint64_t> g_plan_speed_calls{0};

struct ScenarioPed {
  Vec2 position;
  Vec2 velocity;
  PedIntention intention = PedIntention::Walking;
};

// One determinized scenario: fixed intention assignment, phantom existence
// draws, and a seed for the rollout noise stream.
struct DeterminizedScenario {
  double weight = 1.0;
  std::vector<ScenarioPed> peds;
  uint64_t noise_seed = 0;
};

struct RolloutState {
  CarState car;
  std::vector<ScenarioPed> peds;
  std::vector<CarState> other_cars;
  size_t path_idx = 0;  // monotone nearest-pose index along the fixed path
  bool done = false;
};

size_t advance_path_index(const Path& path, const Vec2& pos, size_t idx) {
  double best = (path.poses[idx].position() - pos).norm_sq();
  while (idx + 1 < path.poses.size()) {
    const double d = (path.poses[idx + 1].position() - pos).norm_sq();
    if (d > best) break;
    best = d;
    ++idx;
  }
  return idx;
}

// Continuous arc position at a known nearest index (no path scan). Mirrors
// path_arc_position, including the unclamped first segment.
double arc_position_at(const Path& path, const Vec2& pos, size_t idx) {
  if (path.poses.size() < 2) return 0.0;
  const double spacing = path.length / static_cast<double>(path.poses.size() - 1);
  const size_t seg = idx < path.poses.size() - 1 ? idx : idx - 1;
  const Vec2 a = path.poses[seg].position();
  const Vec2 b = path.poses[seg + 1].position();
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  const double lo = seg == 0 ? -4.0 : 0.0;
  const double t = len_sq > 0.0 ? std::clamp((pos - a).dot(ab) / len_sq, lo, 1.0) : 0.0;
  return (static_cast<double>(seg) + t) * spacing;
}

// Pure pursuit against the pose index instead of a full path scan.
double steering_from_index(const Path& path, const CarState& car, size_t idx, double lookahead,
                           double wheelbase, double steer_max) {
  const Vec2 pos = car.pose.position();
  size_t t = idx;
  while (t + 1 < path.poses.size() && (path.poses[t].position() - pos).norm() < lookahead) {
    ++t;
  }
  const Vec2 target = path.poses[t].position();
  const double alpha =
      normalize_angle(std::atan2(target.y - pos.y, target.x - pos.x) - car.pose.heading);
  const double steering = std::atan2(2.0 * wheelbase * std::sin(alpha), lookahead);
  return std::clamp(steering, -steer_max, steer_max);
}

Vec2 phantom_spawn(const Rect& occluder, const RoadLayout& layout) {
  // Road-side edge midpoint, nudged toward the lane.
  const Vec2 dir = layout.toward_road(occluder.center);
  return occluder.center + dir * (occluder.half_width + 0.4);
}

std::vector<DeterminizedScenario> sample_scenarios(const Belief& belief,
                                                   const PomdpContext& ctx,
                                                   const PomdpBudget& budget, uint64_t seed) {
  std::vector<DeterminizedScenario> scenarios;
  const RoadLayout& layout = *ctx.layout;

  std::vector<const PedBelief*> tracked;
  for (const auto& [id, pb] : belief.peds) tracked.push_back(&pb);

  if (budget.exhaustive) {
    // Cartesian product over tracked pedestrian intentions and phantom
    // existence; weights multiply.
    scenarios.push_back({1.0, {}, seed});
    for (const auto* pb : tracked) {
      std::vector<DeterminizedScenario> expanded;
      for (const auto& s : scenarios) {
        for (int k = 0; k < kNumIntentions; ++k) {
          if (pb->p[k] <= 0.0) continue;
          DeterminizedScenario s2 = s;
          s2.weight *= pb->p[k];
          ScenarioPed ped;
          ped.position = pb->last_position;
          ped.velocity = pb->last_velocity;
          ped.intention = static_cast<PedIntention>(k);
          s2.peds.push_back(ped);
          expanded.push_back(std::move(s2));
        }
      }
      scenarios = std::move(expanded);
    }
    for (size_t oi = 0; oi < belief.phantom_priors.size(); ++oi) {
      const double prior = belief.phantom_priors[oi];
      if (prior <= 0.0) continue;
      std::vector<DeterminizedScenario> expanded;
      for (const auto& s : scenarios) {
        DeterminizedScenario absent = s;
        absent.weight *= (1.0 - prior);
        expanded.push_back(std::move(absent));
        DeterminizedScenario present = s;
        present.weight *= prior;
        ScenarioPed ph;
        ph.position = phantom_spawn(layout.obstacles[oi], layout);
        ph.velocity = {0.0, 0.0};
        ph.intention = PedIntention::Crossing;
        present.peds.push_back(ph);
        expanded.push_back(std::move(present));
      }
      scenarios = std::move(expanded);
    }
    for (size_t k = 0; k < scenarios.size(); ++k) {
      scenarios[k].noise_seed = Rng::derive(seed, k);
    }
    return scenarios;
  }

  const int K = std::max(1, budget.num_scenarios);
  Rng rng(seed);
  for (int k = 0; k < K; ++k) {
    DeterminizedScenario s;
    s.weight = 1.0 / K;
    s.noise_seed = Rng::derive(seed, 1000 + k);
    for (const auto* pb : tracked) {
      const double u = rng.uniform();
      double acc = 0.0;
      int choice = kNumIntentions - 1;
      for (int i = 0; i < kNumIntentions; ++i) {
        acc += pb->p[i];
        if (u < acc) {
          choice = i;
          break;
        }
      }
      ScenarioPed ped;
      ped.position = pb->last_position;
      ped.velocity = pb->last_velocity;
      ped.intention = static_cast<PedIntention>(choice);
      s.peds.push_back(ped);
    }
    for (size_t oi = 0; oi < belief.phantom_priors.size(); ++oi) {
      if (rng.uniform() < belief.phantom_priors[oi]) {
        ScenarioPed ph;
        ph.position = phantom_spawn(layout.obstacles[oi], layout);
        ph.velocity = {0.0, 0.0};
        ph.intention = PedIntention::Crossing;
        s.peds.push_back(ph);
      }
    }
    scenarios.push_back(std::move(s));
  }
  return scenarios;
}

// Deterministic one-step rollout transition. Noise depends only on
// (scenario seed, depth, pedestrian index) so tree branches see identical
// scenario futures regardless of visit order.
double step_scenario(RolloutState& state, SpeedAction action, const Path& path,
                     const DeterminizedScenario& scen, int depth, const PomdpContext& ctx,
                     const PlannerParams& planner_params) {
  if (state.done) return 0.0;
  const WorldParams& wp = ctx.world;

  ControlAction act;
  act.speed_action = action;
  act.steering = steering_from_index(path, state.car, state.path_idx, planner_params.lookahead,
                                     wp.wheelbase, wp.steer_max);

  const CarState next_car = step_car(state.car, act, wp.dt, wp);

  for (size_t pi = 0; pi < state.peds.size(); ++pi) {
    auto& ped = state.peds[pi];
    Vec2 vel = intention_velocity(ped.intention, ped.position, ped.velocity, *ctx.layout,
                                  ctx.params);
    if (ctx.params.sigma_model > 0.0) {
      Rng noise(Rng::derive(scen.noise_seed, static_cast<uint64_t>(depth) * 131 + pi));
      vel.x += noise.gaussian(0.0, ctx.params.sigma_model);
      vel.y += noise.gaussian(0.0, ctx.params.sigma_model);
    }
    ped.velocity = vel;
    ped.position = ped.position + vel * wp.dt;
  }
  for (auto& oc : state.other_cars) {
    oc.pose.x += oc.speed * std::cos(oc.pose.heading) * wp.dt;
    oc.pose.y += oc.speed * std::sin(oc.pose.heading) * wp.dt;
  }

  // Event detection against the rollout pedestrians.
  std::set<EventKind> events;
  const Rect fp{{next_car.pose.x, next_car.pose.y}, wp.car_length / 2.0, wp.car_width / 2.0,
                next_car.pose.heading};
  bool contact = false;
  for (const auto& ped : state.peds) {
    if (fp.distance_to(ped.position) <= wp.ped_radius) {
      contact = true;
      break;
    }
  }
  for (const auto& oc : state.other_cars) {
    if (contact) break;
    const Rect ofp{{oc.pose.x, oc.pose.y}, wp.car_length / 2.0, wp.car_width / 2.0,
                   oc.pose.heading};
    if (rects_overlap(fp, ofp)) contact = true;
  }
  if (contact) events.insert(EventKind::Crash);
  if (!contact && next_car.speed > wp.v_near) {
    for (const auto& ped : state.peds) {
      if (std::max(0.0, fp.distance_to(ped.position) - wp.ped_radius) < wp.d_near) {
        events.insert(EventKind::NearMiss);
        break;
      }
    }
  }
  if ((next_car.pose.position() - ctx.goal.position()).norm() <= wp.goal_radius) {
    events.insert(EventKind::Goal);
  }

  const size_t next_idx = advance_path_index(path, next_car.pose.position(), state.path_idx);
  const double progress = arc_position_at(path, next_car.pose.position(), next_idx) -
                          arc_position_at(path, state.car.pose.position(), state.path_idx);
  const double r = reward_terms(events, progress, next_car.acceleration - state.car.acceleration,
                                ctx.r_min, ctx.r_max);

  state.car = next_car;
  state.path_idx = next_idx;
  if (events.count(EventKind::Crash) || events.count(EventKind::Goal)) state.done = true;
  return r;
}

struct TreeSearch {
  const Path& path;
  const PomdpContext& ctx;
  const std::vector<DeterminizedScenario>& scenarios;
  const PlannerParams& planner_params;
  double gamma;
  int nodes_used = 0;
  int max_nodes;
  bool budget_hit = false;
  std::chrono::steady_clock::time_point deadline;
  bool use_deadline = false;
  // Full action branching for the first `branch_levels` levels; deeper levels
  // commit to the arriving action (macro-action tail). branch_levels >= depth
  // makes the tree exactly full-width expectimax.
  int branch_levels = 0;
  // arena[level] holds the current DFS branch's scenario states; siblings
  // reuse the level buffer, so no per-node allocation.
  std::vector<std::vector<RolloutState>> arena;

  // Value of the best action sequence looking `depth` steps ahead of
  // arena[level]. Weighted mean over scenarios, max over actions.
  double value(int level, int depth, SpeedAction last_action) {
    if (depth == 0) return 0.0;
    if (level >= branch_levels) {
      return q_value(level, last_action, depth);
    }
    double best = -1e300;
    for (int a = 0; a < kNumSpeedActions; ++a) {
      const double q = q_value(level, static_cast<SpeedAction>(a), depth);
      if (budget_hit) return best > -1e300 ? best : 0.0;
      best = std::max(best, q);
    }
    return best;
  }

  double q_value(int level, SpeedAction action, int depth) {
    ++nodes_used;
    if (nodes_used > max_nodes ||
        (use_deadline && std::chrono::steady_clock::now() >= deadline)) {
      budget_hit = true;
      return 0.0;
    }
    auto& next = arena[level + 1];
    next = arena[level];
    double immediate = 0.0;
    for (size_t k = 0; k < next.size(); ++k) {
      const double r =
          step_scenario(next[k], action, path, scenarios[k], depth, ctx, planner_params);
      immediate += scenarios[k].weight * r;
    }
    return immediate + gamma * value(level + 1, depth - 1, action);
  }
};

// Widest full-branching prefix whose iterative-deepening total fits the node
// budget: cost(L, D) = sum_{t<=L} 4^t + 4^L (D - L), summed over depths.
int pick_branch_levels(int depth, int max_nodes) {
  for (int L = depth; L >= 1; --L) {
    double total = 0.0;
    for (int d = 1; d <= depth; ++d) {
      const int l = std::min(L, d);
      double full = 0.0, width = 1.0;
      for (int t = 1; t <= l; ++t) {
        width *= kNumSpeedActions;
        full += width;
      }
      total += full + width * (d - l);
    }
    if (total <= max_nodes) return L;
  }
  return 1;
}

}  // namespace

SpeedPlan plan_speed(const Belief& belief, const Path& path, const CarState& car,
                     const PomdpBudget& budget, const PomdpContext& ctx, uint64_t seed) {
  g_plan_speed_calls.fetch_add(1, std::memory_order_relaxed);

  SpeedPlan plan;
  plan.action = SpeedAction::HardBrake;
  if (path.poses.empty() || budget.depth < 1) return plan;

  const auto scenarios = sample_scenarios(belief, ctx, budget, seed);
  if (scenarios.empty()) return plan;

  PlannerParams planner_params;  // lookahead/steer defaults for path tracking

  std::vector<RolloutState> roots(scenarios.size());
  const size_t start_idx = advance_path_index(path, car.pose.position(), 0);
  for (size_t k = 0; k < scenarios.size(); ++k) {
    roots[k].car = car;
    roots[k].peds = scenarios[k].peds;
    roots[k].path_idx = start_idx;
  }

  TreeSearch search{path,     ctx,
                    scenarios, planner_params,
                    ctx.params.gamma,
                    0,
                    budget.max_nodes,
                    false,
                    {},
                    false,
                    pick_branch_levels(budget.depth, budget.max_nodes),
                    {}};
  if (budget.max_ms > 0.0) {
    search.use_deadline = true;
    search.deadline = std::chrono::steady_clock::now() +
                      std::chrono::microseconds(static_cast<int64_t>(budget.max_ms * 1000.0));
  }
  search.arena.assign(budget.depth + 1, roots);

  // Iterative deepening; keep the deepest fully evaluated root values.
  std::array<double, kNumSpeedActions> best_values{};
  int completed = 0;
  for (int d = 1; d <= budget.depth; ++d) {
    std::array<double, kNumSpeedActions> values{};
    bool complete = true;
    for (int a = 0; a < kNumSpeedActions; ++a) {
      search.arena[0] = roots;
      values[a] = search.q_value(0, static_cast<SpeedAction>(a), d);
      if (search.budget_hit) {
        complete = false;
        break;
      }
    }
    if (!complete) break;
    best_values = values;
    completed = d;
  }
  if (completed == 0) {
    // Budget too small for even depth 1; evaluate it ignoring the budget so a
    // valid action is always returned.
    search.budget_hit = false;
    search.max_nodes = search.nodes_used + 16;
    for (int a = 0; a < kNumSpeedActions; ++a) {
      search.arena[0] = roots;
      best_values[a] = search.q_value(0, static_cast<SpeedAction>(a), 1);
    }
    completed = 1;
  }

  plan.values = best_values;
  plan.completed_depth = completed;
  plan.nodes = search.nodes_used;
  int arg = 0;
  for (int a = 1; a < kNumSpeedActions; ++a) {
    if (best_values[a] > best_values[arg]) arg = a;
  }
  plan.action = static_cast<SpeedAction>(arg);
  return plan;
}

uint64_t plan_speed_call_count() { return g_plan_speed_calls.load(std::memory_order_relaxed); }
void reset_plan_speed_call_count() { g_plan_speed_calls.store(0, std::memory_order_relaxed); }

}  // namespace hylear
