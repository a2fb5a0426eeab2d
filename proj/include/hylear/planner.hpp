#ifndef HYLEAR_PLANNER_HPP_
#define HYLEAR_PLANNER_HPP_

#include <optional>
#include <vector>

#include "hylear/costmap.hpp"

namespace hylear {

// One lattice motion: a constant-curvature arc that ends exactly
// delta_bin heading bins away from where it started.
struct MotionPrimitive {
  int id = 0;
  double curvature = 0.0;  // 1/m, signed; 0 is straight
  double length = 0.0;     // m
  int delta_bin = 0;       // heading bins turned, exact by construction
};

// Straight 1 m plus two left and two right arcs, each turning exactly one
// heading bin over 2 m and 3 m. Bin-exact headings keep the search graph a
// pure function of the (cell, heading-bin) state, so an uninformed search on
// the same lattice is a valid optimality oracle.
std::vector<MotionPrimitive> lattice_primitives(int heading_bins);

// Canonical lattice state: cell-center position, bin-center heading.
struct LatticeState {
  int i = 0;
  int j = 0;
  int bin = 0;
};

struct LatticeEdge {
  LatticeState to;
  double cost = 0.0;    // integrated cell cost along the swept polyline
  double length = 0.0;  // polyline length (arc + snap segment)
  int primitive = 0;
};

Pose lattice_pose(const CostMap& map, const LatticeState& s, int heading_bins);

// Expands every feasible primitive from s. Edges that sweep an infinite-cost
// or out-of-map cell are dropped. Shared by the planner and test oracles.
std::vector<LatticeEdge> lattice_successors(const CostMap& map, const LatticeState& s,
                                            const std::vector<MotionPrimitive>& prims,
                                            int heading_bins);

struct Path {
  std::vector<Pose> poses;  // fixed arc-length spacing (map resolution)
  double total_cost = 0.0;
  double length = 0.0;
  MapVariant source_map = MapVariant::Base;
  std::vector<int> primitive_ids;
};

struct SearchBudget {
  int max_expansions = 20000;    // shared across the whole anytime schedule
  double deadline_ms = 0.0;      // > 0 enables wall-clock mode
  std::vector<double> weight_schedule{2.0, 1.5, 1.2, 1.0};
};

enum class PlanFailure { None, BudgetExhausted, Unreachable };

struct PlanResult {
  std::optional<Path> path;
  PlanFailure failure = PlanFailure::None;
  double bound_weight = 0.0;  // smallest schedule weight whose search completed
  int expansions = 0;
};

// Anytime weighted A* over the (x, y, heading-bin) lattice. Runs the weight
// schedule largest-first, keeps the cheapest solution found, and reports the
// suboptimality bound actually achieved. Tie-breaking is (f, g, insertion
// order), so expansion-count mode is fully deterministic.
PlanResult plan_path(const CostMap& map, const Pose& start, const Pose& goal,
                     const SearchBudget& budget, const PlannerParams& pp);

struct KPathResult {
  std::vector<Path> paths;  // at most one per map variant, in variant order
  std::array<CostMap, 3> maps;  // base, sidewalk, predictive
  PredictedOccupancy prediction;
};

// Builds the base / sidewalk / predictive maps from the observable world and
// plans on each. Infeasible variants are omitted; throws PolicyError when all
// three fail (caller falls back to full braking).
KPathResult plan_k_paths(const WorldState& obs, const RoadLayout& layout, const Pose& goal,
                         const SearchBudget& budget, const PlannerParams& pp,
                         const CostmapParams& cp, const WorldParams& wp, int threads = 1);

// Pure pursuit: steer toward the first path pose at least `lookahead` ahead
// of the car (the last pose on shorter paths).
double extract_steering(const Path& path, const CarState& car, const PlannerParams& pp,
                        const WorldParams& wp);

// Clamps a goal into the map window; if the landing cell is blocked, walks a
// spiral to the nearest finite-cost cell.
Pose project_goal_into_map(const CostMap& map, const Pose& goal);

}  // namespace hylear

#endif  // HYLEAR_PLANNER_HPP_
