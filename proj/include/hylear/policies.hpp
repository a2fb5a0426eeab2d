#ifndef HYLEAR_POLICIES_HPP_
#define HYLEAR_POLICIES_HPP_

#include <deque>
#include <memory>
#include <optional>

#include "hylear/belief.hpp"
#include "hylear/episode.hpp"
#include "hylear/pomdp.hpp"
#include "hylear/rulebook.hpp"
#include "hylear/sac.hpp"

namespace hylear {

// Shared hybrid-planning front end: cost maps, k paths, risks, rulebook
// selection, pure-pursuit steering, belief upkeep. Falls back to full braking
// when no variant is feasible.
class HybridPlannerCore {
 public:
  explicit HybridPlannerCore(const Config& cfg);

  void reset(const Scenario& scenario);

  struct StepPlan {
    bool fallback = false;  // no feasible path: full braking
    Path path;
    PathRisk risk;
    double steering = 0.0;
    CostMap selected_map;
    PredictedOccupancy prediction;
  };

  StepPlan plan(const WorldState& obs);

  const Belief& belief() const { return belief_; }
  const Scenario& scenario() const { return *scenario_; }
  const Config& config() const { return cfg_; }

  // Reward estimate from observable states only; feeds the observation's
  // previous-reward scalar identically at train and test time.
  double observable_reward(const WorldState& prev_obs, const ControlAction& action,
                           const WorldState& next_obs, const Path& path) const;

 private:
  Config cfg_;
  const Scenario* scenario_ = nullptr;
  Belief belief_;
  bool belief_fresh_ = false;
};

// hylear test-mode policy: planner-selected path for steering, trained policy
// network for the speed action; the POMDP planner is never invoked.
class HylearPolicy : public Policy {
 public:
  HylearPolicy(const Config& cfg, SacState sac);
  std::string name() const override { return "hylear"; }
  void reset(const Scenario& scenario) override;
  ControlAction act(const WorldState& obs) override;
  double last_step_risk() const override { return last_risk_; }

 private:
  HybridPlannerCore core_;
  SacState sac_;
  double last_risk_ = 0.0;
  double prev_reward_ = 0.0;
  SpeedAction prev_action_ = SpeedAction::Maintain;
  std::optional<WorldState> prev_obs_;
  std::optional<Path> prev_path_;
  std::deque<Vec2> car_history_;
  Rng rng_{0};
};

// Planner-only baseline: k-path + rulebook steering, POMDP speed action.
class PlannerOnlyPolicy : public Policy {
 public:
  explicit PlannerOnlyPolicy(const Config& cfg);
  std::string name() const override { return "planner-only"; }
  void reset(const Scenario& scenario) override;
  ControlAction act(const WorldState& obs) override;
  double last_step_risk() const override { return last_risk_; }

 private:
  HybridPlannerCore core_;
  double last_risk_ = 0.0;
  uint64_t step_ = 0;
};

// Learner-only baseline: base cost map only, no rulebook; speed from the
// trained network.
class LearnerOnlyPolicy : public Policy {
 public:
  LearnerOnlyPolicy(const Config& cfg, SacState sac);
  std::string name() const override { return "learner-only"; }
  void reset(const Scenario& scenario) override;
  ControlAction act(const WorldState& obs) override;
  double last_step_risk() const override { return last_risk_; }

 private:
  Config cfg_;
  SacState sac_;
  const Scenario* scenario_ = nullptr;
  double last_risk_ = 0.0;
  double prev_reward_ = 0.0;
  SpeedAction prev_action_ = SpeedAction::Maintain;
  std::optional<WorldState> prev_obs_;
  std::optional<Path> prev_path_;
  std::deque<Vec2> car_history_;
};

// Drives the straight start-goal line and always accelerates.
class AlwaysAcceleratePolicy : public Policy {
 public:
  explicit AlwaysAcceleratePolicy(const Config& cfg);
  std::string name() const override { return "always-accelerate"; }
  void reset(const Scenario& scenario) override;
  ControlAction act(const WorldState& obs) override;
  double last_step_risk() const override { return last_risk_; }

 protected:
  Config cfg_;
  Path line_;
  double last_risk_ = 0.0;
  const Scenario* scenario_ = nullptr;
};

// Straight-line steering, uniformly random speed action.
class RandomPolicy : public AlwaysAcceleratePolicy {
 public:
  explicit RandomPolicy(const Config& cfg);
  std::string name() const override { return "random"; }
  void reset(const Scenario& scenario) override;
  ControlAction act(const WorldState& obs) override;

 private:
  Rng rng_{0};
};

// Factory for the benchmark CLI. Policies needing a checkpoint throw
// ConfigError when none is given.
std::unique_ptr<Policy> make_policy(const std::string& spec, const Config& cfg,
                                    const std::string& checkpoint_path);

}  // namespace hylear

#endif  // HYLEAR_POLICIES_HPP_
