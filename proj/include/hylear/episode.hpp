#ifndef HYLEAR_EPISODE_HPP_
#define HYLEAR_EPISODE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "hylear/world.hpp"

namespace hylear {

enum class Outcome : int { Goal = 0, Crash = 1, NearMissGoal = 2, Timeout = 3 };

std::string outcome_name(Outcome o);
std::string event_name(EventKind e);

struct EpisodeTrace {
  std::string scenario_id;
  std::string family;
  uint64_t seed = 0;
  double dt = 0.1;
  std::vector<WorldState> states;          // states[0] is the initial state
  std::vector<ControlAction> actions;      // actions[i] taken from states[i]
  std::vector<std::pair<double, EventKind>> events;
  std::vector<double> risk_series;         // per-step mean planned-path risk
  std::vector<double> decision_ms;         // per-decision wall time (0 when timing off)
  Outcome outcome = Outcome::Timeout;
  double ttg = -1.0;                       // valid iff outcome is Goal/NearMissGoal
};

// Per-episode decision maker. reset() is called once per episode before any
// act(); act() sees only the observable world.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Scenario& scenario) = 0;
  virtual ControlAction act(const WorldState& observable) = 0;
  // Mean per-pose perceived risk of this step's committed trajectory.
  virtual double last_step_risk() const { return 0.0; }
};

struct EpisodeOptions {
  uint64_t seed = 0;        // 0: use scenario.seed
  bool wall_timing = true;  // false records decision_ms = 0
};

// Steps at fixed dt until Crash, Goal or timeout. Crash terminates
// immediately; near-misses are recorded but non-terminal. Policy exceptions
// abort the episode with a PolicyError carrying the scenario id.
EpisodeTrace run_episode(const Scenario& scenario, Policy& policy, const WorldParams& wp,
                         const EpisodeOptions& opts = {});

std::string trace_to_jsonl(const EpisodeTrace& trace);
void save_trace(const EpisodeTrace& trace, const std::string& path);

// Lean record for metric recomputation from persisted traces.
struct TraceSummary {
  std::string scenario_id;
  std::string family;
  Outcome outcome = Outcome::Timeout;
  double ttg = -1.0;
  double dt = 0.1;
  bool had_near_miss = false;
  bool had_crash = false;
  std::vector<double> accelerations;  // per step
  std::vector<double> risk_series;
  std::vector<double> decision_ms;
};

TraceSummary summarize_trace(const EpisodeTrace& trace);
TraceSummary load_trace_summary(const std::string& path);

}  // namespace hylear

#endif  // HYLEAR_EPISODE_HPP_
