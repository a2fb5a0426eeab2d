#ifndef HYLEAR_SCENARIO_HPP_
#define HYLEAR_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hylear/road_layout.hpp"

namespace hylear {

struct PedSpec {
  Vec2 spawn;
  Vec2 walk_dir{1.0, 0.0};       // sidewalk walking direction before the trigger
  double speed = 1.4;            // m/s while crossing (grid parameter)
  double crossing_distance = 7.0;  // m walked into/across the road (grid parameter)
  double trigger_distance = 20.0;  // m, car proximity that starts the crossing
};

struct IncomingCarSpec {
  Pose start;
  double speed = 5.0;  // constant-speed lane follower
};

struct Scenario {
  std::string id;
  std::string family;
  RoadLayout layout;
  Pose car_start;
  Pose car_goal;
  std::vector<PedSpec> peds;
  std::optional<IncomingCarSpec> incoming_car;
  uint64_t seed = 0;
};

// A family document: fixed layout plus the per-family parameter grid.
struct ScenarioFamily {
  int format = 1;
  std::string name;
  RoadLayout layout;
  Pose car_start;
  Pose car_goal;
  std::vector<PedSpec> ped_templates;  // speed/crossing_distance filled from the grid
  std::optional<IncomingCarSpec> incoming_car;
  std::vector<double> grid_speeds;
  std::vector<double> grid_crossing_distances;
};

// Expands every family over its full (speed x crossing_distance) grid.
// Deterministic: scenario seeds derive from base_seed and the global index.
std::vector<Scenario> generate_scenarios(const std::vector<ScenarioFamily>& families,
                                         uint64_t base_seed);

ScenarioFamily parse_family(const std::string& json_text);
ScenarioFamily load_family(const std::string& path);
std::string family_to_json(const ScenarioFamily& f);

// Hand-authored catalogue: 12 benchmark families and 3 short toy families.
std::vector<ScenarioFamily> builtin_families();
std::vector<ScenarioFamily> builtin_toy_families();

}  // namespace hylear

#endif  // HYLEAR_SCENARIO_HPP_
