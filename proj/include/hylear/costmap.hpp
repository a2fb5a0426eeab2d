#ifndef HYLEAR_COSTMAP_HPP_
#define HYLEAR_COSTMAP_HPP_

#include <limits>
#include <string>
#include <vector>

#include "hylear/world.hpp"

namespace hylear {

enum class MapVariant : int { Base = 0, Sidewalk = 1, Predictive = 2 };
std::string map_variant_name(MapVariant v);

constexpr double kInfCost = std::numeric_limits<double>::infinity();

// Planar traversal-cost grid. Infinite cost marks untraversable cells; every
// finite cost is >= cost_floor so A* heuristics stay admissible.
struct CostMap {
  Vec2 origin;            // world position of cell (0, 0) corner
  double resolution = 0.25;
  int width = 0;
  int height = 0;
  std::vector<double> cells;
  std::vector<CellClass> cell_class;

  bool in_bounds(int i, int j) const { return i >= 0 && i < width && j >= 0 && j < height; }
  int index(int i, int j) const { return j * width + i; }
  double cost_at(int i, int j) const { return cells[index(i, j)]; }
  CellClass class_at(int i, int j) const { return cell_class[index(i, j)]; }

  // World <-> grid. Cells are squares of side `resolution`; cell (i, j)
  // covers [origin + i*res, origin + (i+1)*res).
  int to_cell_x(double x) const { return static_cast<int>(std::floor((x - origin.x) / resolution)); }
  int to_cell_y(double y) const { return static_cast<int>(std::floor((y - origin.y) / resolution)); }
  Vec2 cell_center(int i, int j) const {
    return {origin.x + (i + 0.5) * resolution, origin.y + (j + 0.5) * resolution};
  }
  bool contains(const Vec2& p) const {
    const int i = to_cell_x(p.x), j = to_cell_y(p.y);
    return in_bounds(i, j);
  }
  double cost_at_point(const Vec2& p) const {
    const int i = to_cell_x(p.x), j = to_cell_y(p.y);
    return in_bounds(i, j) ? cost_at(i, j) : kInfCost;
  }
};

// Multi-hypothesis pedestrian forecast: per step, weighted discs per
// pedestrian; hypothesis weights sum to 1 per pedestrian per step.
struct PredictedDisc {
  Vec2 center;
  double radius = 0.3;
  double weight = 1.0;
  int pedestrian = 0;
};

struct PredictedOccupancy {
  int horizon_steps = 0;
  std::vector<std::vector<PredictedDisc>> steps;  // steps[t] = discs at step t
};

// Lane cells cost c_lane, sidewalks c_sidewalk, obstacles infinite; observed
// pedestrian discs (inflated by ped_margin) are infinite. The map window is
// centered forward_offset ahead of the car. Throws ConfigError when the car
// is outside the layout bounds.
CostMap build_base_costmap(const WorldState& obs, const RoadLayout& layout,
                           const CostmapParams& cp, const WorldParams& wp);

// Sidewalk cells further than ped_clear from every observed pedestrian get
// the discounted cost c_sidewalk_free; everything else is untouched.
CostMap build_sidewalk_costmap(const CostMap& base, const WorldState& obs,
                               const CostmapParams& cp);

// Three hypotheses per pedestrian: continue at the history-fit velocity
// (w=0.5), turn perpendicular toward the road (w=0.3), stop (w=0.2). Discs
// grow linearly with the prediction step. Pedestrians with fewer than two
// history points get a single stationary hypothesis.
PredictedOccupancy predict_pedestrians(const std::vector<PedestrianState>& peds,
                                       const RoadLayout& layout, int horizon,
                                       const CostmapParams& cp, const WorldParams& wp);

// Adds c_pred * weight * (1 - t/horizon) on every cell covered by a
// predicted disc; never turns a finite cell infinite.
CostMap build_predictive_costmap(const CostMap& base, const PredictedOccupancy& pred,
                                 const CostmapParams& cp);

// Debug dump: PGM grayscale plus a sidecar metadata text file.
void dump_costmap_pgm(const CostMap& map, const std::string& pgm_path,
                      const std::string& meta_path);

}  // namespace hylear

#endif  // HYLEAR_COSTMAP_HPP_
