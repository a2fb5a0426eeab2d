#include "hylear/policies.hpp"

#include <algorithm>
#include <cmath>

#include "hylear/io_util.hpp"

namespace hylear {

namespace {

constexpr size_t kCarHistory = 20;

// Straight two-pose path between start and goal, sampled at 0.5 m.
Path straight_line_path(const Pose& start, const Pose& goal) {
  Path p;
  const Vec2 a = start.position(), b = goal.position();
  const Vec2 d = b - a;
  const double len = d.norm();
  const double heading = std::atan2(d.y, d.x);
  const int n = std::max(2, static_cast<int>(len / 0.5));
  for (int k = 0; k <= n; ++k) {
    const Vec2 q = a + d * (static_cast<double>(k) / n);
    p.poses.push_back({q.x, q.y, heading});
  }
  p.length = len;
  p.total_cost = len;
  return p;
}

std::vector<Hazard> step_hazards(const WorldState& obs, const RoadLayout& layout,
                                 const PredictedOccupancy* pred, const Vec2& eval_point,
                                 const RiskParams& rp) {
  return collect_hazards(obs, layout, pred, eval_point, rp);
}

}  // namespace

HybridPlannerCore::HybridPlannerCore(const Config& cfg) : cfg_(cfg) {}

void HybridPlannerCore::reset(const Scenario& scenario) {
  scenario_ = &scenario;
  belief_ = initial_belief(scenario.layout, cfg_.pomdp);
  belief_fresh_ = true;
}

HybridPlannerCore::StepPlan HybridPlannerCore::plan(const WorldState& obs) {
  if (!scenario_) throw PolicyError("HybridPlannerCore: plan() before reset()");
  StepPlan out;

  ControlAction prev_action;  // belief update only uses the observation
  belief_ = update_belief(belief_, prev_action, obs, scenario_->layout, cfg_.world.dt,
                          cfg_.pomdp);

  SearchBudget budget;
  budget.max_expansions = cfg_.planner.max_expansions;
  budget.deadline_ms = cfg_.planner.deadline_ms;
  budget.weight_schedule = cfg_.planner.weight_schedule;

  KPathResult k;
  try {
    k = plan_k_paths(obs, scenario_->layout, scenario_->car_goal, budget, cfg_.planner,
                     cfg_.costmap, cfg_.world, 1);
  } catch (const PolicyError&) {
    out.fallback = true;
    const auto hazards = step_hazards(obs, scenario_->layout, nullptr,
                                      obs.car.pose.position(), cfg_.risk);
    out.risk.aggregate = risk_at(obs.car.pose, obs.car.speed, hazards, cfg_.risk);
    out.risk.mean = out.risk.aggregate;
    return out;
  }

  std::vector<Candidate> candidates;
  std::vector<PathRisk> risks;
  for (auto& path : k.paths) {
    const auto hazards = step_hazards(obs, scenario_->layout, &k.prediction,
                                      obs.car.pose.position(), cfg_.risk);
    PathRisk risk = path_risk(path, obs.car.speed, hazards, cfg_.risk);
    Candidate c;
    c.path = std::move(path);
    c.violations = score_violations(c.path, risk, scenario_->layout, cfg_.risk);
    candidates.push_back(std::move(c));
    risks.push_back(std::move(risk));
  }
  const int sel = select_path_index(candidates, cfg_.rulebook);
  out.path = candidates[sel].path;
  out.risk = risks[sel];
  out.steering = extract_steering(out.path, obs.car, cfg_.planner, cfg_.world);
  out.selected_map = std::move(k.maps[static_cast<int>(out.path.source_map)]);
  out.prediction = std::move(k.prediction);
  return out;
}

double HybridPlannerCore::observable_reward(const WorldState& prev_obs,
                                            const ControlAction& action,
                                            const WorldState& next_obs,
                                            const Path& path) const {
  const auto events = detect_events(next_obs, scenario_->car_goal, cfg_.world);
  return reward(prev_obs, action, next_obs, events, path, cfg_.sac.r_min, cfg_.sac.r_max);
}

// ---------------------------------------------------------------------------

HylearPolicy::HylearPolicy(const Config& cfg, SacState sac)
    : core_(cfg), sac_(std::move(sac)) {}

void HylearPolicy::reset(const Scenario& scenario) {
  core_.reset(scenario);
  prev_reward_ = 0.0;
  prev_action_ = SpeedAction::Maintain;
  prev_obs_.reset();
  prev_path_.reset();
  car_history_.clear();
  rng_ = Rng(scenario.seed ^ 0x9e3779b9ULL);
  last_risk_ = 0.0;
}

ControlAction HylearPolicy::act(const WorldState& obs) {
  const Config& cfg = core_.config();
  auto plan = core_.plan(obs);
  if (plan.fallback) {
    last_risk_ = plan.risk.mean;
    prev_obs_ = obs;
    return ControlAction{0.0, SpeedAction::HardBrake};
  }

  if (prev_obs_ && prev_path_) {
    ControlAction prev{0.0, prev_action_};
    prev_reward_ = core_.observable_reward(*prev_obs_, prev, obs, *prev_path_);
  }

  car_history_.push_back(obs.car.pose.position());
  while (car_history_.size() > kCarHistory) car_history_.pop_front();

  EncodeInputs in;
  in.obs_world = &obs;
  in.source_map = &plan.selected_map;
  in.selected_path = &plan.path;
  in.prediction = &plan.prediction;
  in.car_history = &car_history_;
  in.prev_reward = prev_reward_;
  in.speed = obs.car.speed;
  in.prev_action = prev_action_;
  const Observation o = encode_observation(in, cfg.sac, cfg.world, cfg.costmap);

  const ActResult res = hylear::act(o, sac_, cfg.sac, nullptr, 1.0, ActMode::Test, rng_);

  last_risk_ = plan.risk.mean;
  prev_obs_ = obs;
  prev_path_ = plan.path;
  prev_action_ = res.action;
  return ControlAction{plan.steering, res.action};
}

// ---------------------------------------------------------------------------

PlannerOnlyPolicy::PlannerOnlyPolicy(const Config& cfg) : core_(cfg) {}

void PlannerOnlyPolicy::reset(const Scenario& scenario) {
  core_.reset(scenario);
  step_ = 0;
  last_risk_ = 0.0;
}

ControlAction PlannerOnlyPolicy::act(const WorldState& obs) {
  const Config& cfg = core_.config();
  auto plan = core_.plan(obs);
  if (plan.fallback) {
    last_risk_ = plan.risk.mean;
    return ControlAction{0.0, SpeedAction::HardBrake};
  }

  PomdpBudget budget;
  budget.num_scenarios = cfg.pomdp.num_scenarios;
  budget.depth = cfg.pomdp.depth;
  budget.max_nodes = cfg.pomdp.max_nodes;
  budget.max_ms = cfg.pomdp.max_ms;

  PomdpContext ctx;
  ctx.layout = &core_.scenario().layout;
  ctx.goal = core_.scenario().car_goal;
  ctx.world = cfg.world;
  ctx.params = cfg.pomdp;
  ctx.r_min = cfg.sac.r_min;
  ctx.r_max = cfg.sac.r_max;

  const uint64_t seed = Rng::derive(core_.scenario().seed, ++step_);
  const SpeedPlan sp = plan_speed(core_.belief(), plan.path, obs.car, budget, ctx, seed);

  last_risk_ = plan.risk.mean;
  return ControlAction{plan.steering, sp.action};
}

// ---------------------------------------------------------------------------

LearnerOnlyPolicy::LearnerOnlyPolicy(const Config& cfg, SacState sac)
    : cfg_(cfg), sac_(std::move(sac)) {}

void LearnerOnlyPolicy::reset(const Scenario& scenario) {
  scenario_ = &scenario;
  prev_reward_ = 0.0;
  prev_action_ = SpeedAction::Maintain;
  prev_obs_.reset();
  prev_path_.reset();
  car_history_.clear();
  last_risk_ = 0.0;
}

ControlAction LearnerOnlyPolicy::act(const WorldState& obs) {
  SearchBudget budget;
  budget.max_expansions = cfg_.planner.max_expansions;
  budget.deadline_ms = cfg_.planner.deadline_ms;
  budget.weight_schedule = cfg_.planner.weight_schedule;

  CostMap base;
  PlanResult plan;
  try {
    base = build_base_costmap(obs, scenario_->layout, cfg_.costmap, cfg_.world);
    const Pose goal = project_goal_into_map(base, scenario_->car_goal);
    plan = plan_path(base, obs.car.pose, goal, budget, cfg_.planner);
  } catch (const std::exception&) {
    return ControlAction{0.0, SpeedAction::HardBrake};
  }
  if (!plan.path) {
    const auto hazards = collect_hazards(obs, scenario_->layout, nullptr,
                                         obs.car.pose.position(), cfg_.risk);
    last_risk_ = risk_at(obs.car.pose, obs.car.speed, hazards, cfg_.risk);
    return ControlAction{0.0, SpeedAction::HardBrake};
  }
  Path& path = *plan.path;

  const auto hazards = collect_hazards(obs, scenario_->layout, nullptr,
                                       obs.car.pose.position(), cfg_.risk);
  const PathRisk risk = path_risk(path, obs.car.speed, hazards, cfg_.risk);

  if (prev_obs_ && prev_path_) {
    ControlAction prev{0.0, prev_action_};
    const auto events = detect_events(obs, scenario_->car_goal, cfg_.world);
    prev_reward_ = reward(*prev_obs_, prev, obs, events, *prev_path_, cfg_.sac.r_min,
                          cfg_.sac.r_max);
  }
  car_history_.push_back(obs.car.pose.position());
  while (car_history_.size() > kCarHistory) car_history_.pop_front();

  EncodeInputs in;
  in.obs_world = &obs;
  in.source_map = &base;
  in.selected_path = &path;
  in.prediction = nullptr;
  in.car_history = &car_history_;
  in.prev_reward = prev_reward_;
  in.speed = obs.car.speed;
  in.prev_action = prev_action_;
  const Observation o = encode_observation(in, cfg_.sac, cfg_.world, cfg_.costmap);

  Rng rng(0);  // test mode is deterministic; rng unused
  const ActResult res = hylear::act(o, sac_, cfg_.sac, nullptr, 1.0, ActMode::Test, rng);

  const double steering = extract_steering(path, obs.car, cfg_.planner, cfg_.world);
  last_risk_ = risk.mean;
  prev_obs_ = obs;
  prev_path_ = std::move(path);
  prev_action_ = res.action;
  return ControlAction{steering, res.action};
}

// ---------------------------------------------------------------------------

AlwaysAcceleratePolicy::AlwaysAcceleratePolicy(const Config& cfg) : cfg_(cfg) {}

void AlwaysAcceleratePolicy::reset(const Scenario& scenario) {
  scenario_ = &scenario;
  line_ = straight_line_path(scenario.car_start, scenario.car_goal);
  last_risk_ = 0.0;
}

ControlAction AlwaysAcceleratePolicy::act(const WorldState& obs) {
  const double steering = extract_steering(line_, obs.car, cfg_.planner, cfg_.world);
  const auto hazards = collect_hazards(obs, scenario_->layout, nullptr,
                                       obs.car.pose.position(), cfg_.risk);
  last_risk_ = risk_at(obs.car.pose, obs.car.speed, hazards, cfg_.risk);
  return ControlAction{steering, SpeedAction::Accelerate};
}

RandomPolicy::RandomPolicy(const Config& cfg) : AlwaysAcceleratePolicy(cfg) {}

void RandomPolicy::reset(const Scenario& scenario) {
  AlwaysAcceleratePolicy::reset(scenario);
  rng_ = Rng(scenario.seed ^ 0x5bd1e995ULL);
}

ControlAction RandomPolicy::act(const WorldState& obs) {
  ControlAction a = AlwaysAcceleratePolicy::act(obs);
  a.speed_action = static_cast<SpeedAction>(rng_.uniform_int(kNumSpeedActions));
  return a;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Policy> make_policy(const std::string& spec, const Config& cfg,
                                    const std::string& checkpoint_path) {
  const bool needs_checkpoint = spec == "hylear" || spec == "learner-only";
  if (needs_checkpoint && checkpoint_path.empty()) {
    throw ConfigError("policy '" + spec + "' requires a checkpoint");
  }
  if (spec == "hylear" || spec == "learner-only") {
    SacState st = make_sac_state(cfg.sac, 1);
    NetParams loaded = load_checkpoint(checkpoint_path);
    if (loaded.total_size() != st.live.total_size()) {
      throw ConfigError("checkpoint does not match the configured network");
    }
    st.live = loaded;
    st.target = st.live;
    if (spec == "hylear") return std::make_unique<HylearPolicy>(cfg, std::move(st));
    return std::make_unique<LearnerOnlyPolicy>(cfg, std::move(st));
  }
  if (spec == "planner-only") return std::make_unique<PlannerOnlyPolicy>(cfg);
  if (spec == "always-accelerate") return std::make_unique<AlwaysAcceleratePolicy>(cfg);
  if (spec == "random") return std::make_unique<RandomPolicy>(cfg);
  throw ConfigError("unknown policy spec: " + spec);
}

}  // namespace hylear
