#include "hylear/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hylear/io_util.hpp"

namespace hylear {

std::string map_variant_name(MapVariant v) {
  switch (v) {
    case MapVariant::Base: return "base";
    case MapVariant::Sidewalk: return "sidewalk";
    case MapVariant::Predictive: return "predictive";
  }
  return "unknown";
}

namespace {

// Stamps infinite cost on all cells whose center lies within `radius` of p.
void stamp_disc(CostMap& map, const Vec2& p, double radius) {
  const int i0 = std::max(0, map.to_cell_x(p.x - radius) - 1);
  const int i1 = std::min(map.width - 1, map.to_cell_x(p.x + radius) + 1);
  const int j0 = std::max(0, map.to_cell_y(p.y - radius) - 1);
  const int j1 = std::min(map.height - 1, map.to_cell_y(p.y + radius) + 1);
  const double r_sq = radius * radius;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Vec2 c = map.cell_center(i, j);
      if ((c - p).norm_sq() <= r_sq) {
        map.cells[map.index(i, j)] = kInfCost;
        map.cell_class[map.index(i, j)] = CellClass::Obstacle;
      }
    }
  }
}

}  // namespace

CostMap build_base_costmap(const WorldState& obs, const RoadLayout& layout,
                           const CostmapParams& cp, const WorldParams& wp) {
  const Vec2 car = obs.car.pose.position();
  if (!layout.bounds.contains(car)) {
    throw ConfigError("car outside layout bounds");
  }

  CostMap map;
  map.resolution = cp.resolution;
  map.width = static_cast<int>(std::lround(cp.window / cp.resolution));
  map.height = map.width;
  const Vec2 center = car + obs.car.pose.direction() * cp.forward_offset;
  // Snap the origin to the resolution grid so rebuilds from equal states are
  // bit-identical and nearby windows share cell boundaries.
  map.origin.x = std::floor((center.x - cp.window / 2.0) / cp.resolution) * cp.resolution;
  map.origin.y = std::floor((center.y - cp.window / 2.0) / cp.resolution) * cp.resolution;
  map.cells.assign(static_cast<size_t>(map.width) * map.height, 0.0);
  map.cell_class.assign(static_cast<size_t>(map.width) * map.height, CellClass::Free);

  for (int j = 0; j < map.height; ++j) {
    for (int i = 0; i < map.width; ++i) {
      const Vec2 c = map.cell_center(i, j);
      CellClass cls = layout.classify(c);
      // Inflate static obstacles so a point search keeps the car body clear.
      if (cls != CellClass::Obstacle && cp.obstacle_inflation > 0.0) {
        for (const auto& ob : layout.obstacles) {
          if (ob.distance_to(c) <= cp.obstacle_inflation) {
            cls = CellClass::Obstacle;
            break;
          }
        }
      }
      double cost = cp.c_offroad;
      switch (cls) {
        case CellClass::Lane: cost = cp.c_lane; break;
        case CellClass::Sidewalk: cost = cp.c_sidewalk; break;
        case CellClass::Obstacle: cost = kInfCost; break;
        case CellClass::Free: cost = cp.c_offroad; break;
      }
      map.cells[map.index(i, j)] = cost;
      map.cell_class[map.index(i, j)] = cls;
    }
  }

  for (const auto& ped : obs.pedestrians) {
    stamp_disc(map, ped.position, wp.ped_radius + cp.ped_margin);
  }
  for (const auto& oc : obs.other_cars) {
    const Rect fp{{oc.pose.x, oc.pose.y}, wp.car_length / 2.0, wp.car_width / 2.0,
                  oc.pose.heading};
    const Rect inflated = fp.inflated(cp.obstacle_inflation);
    const auto cs = inflated.corners();
    double min_x = cs[0].x, max_x = cs[0].x, min_y = cs[0].y, max_y = cs[0].y;
    for (const auto& c : cs) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
    const int i0 = std::max(0, map.to_cell_x(min_x) - 1);
    const int i1 = std::min(map.width - 1, map.to_cell_x(max_x) + 1);
    const int j0 = std::max(0, map.to_cell_y(min_y) - 1);
    const int j1 = std::min(map.height - 1, map.to_cell_y(max_y) + 1);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        if (inflated.contains(map.cell_center(i, j))) {
          map.cells[map.index(i, j)] = kInfCost;
          map.cell_class[map.index(i, j)] = CellClass::Obstacle;
        }
      }
    }
  }
  return map;
}

CostMap build_sidewalk_costmap(const CostMap& base, const WorldState& obs,
                               const CostmapParams& cp) {
  CostMap map = base;
  for (int j = 0; j < map.height; ++j) {
    for (int i = 0; i < map.width; ++i) {
      if (map.class_at(i, j) != CellClass::Sidewalk) continue;
      const Vec2 c = map.cell_center(i, j);
      bool clear = true;
      for (const auto& ped : obs.pedestrians) {
        if ((ped.position - c).norm() < cp.ped_clear) {
          clear = false;
          break;
        }
      }
      if (clear) map.cells[map.index(i, j)] = cp.c_sidewalk_free;
    }
  }
  return map;
}

PredictedOccupancy predict_pedestrians(const std::vector<PedestrianState>& peds,
                                       const RoadLayout& layout, int horizon,
                                       const CostmapParams& cp, const WorldParams& wp) {
  PredictedOccupancy out;
  out.horizon_steps = horizon;
  out.steps.resize(horizon);
  for (size_t pi = 0; pi < peds.size(); ++pi) {
    const auto& ped = peds[pi];
    struct Hyp {
      Vec2 vel;
      double weight;
    };
    std::vector<Hyp> hyps;
    if (ped.history.size() < 2) {
      hyps.push_back({{0.0, 0.0}, 1.0});
    } else {
      // History-fit velocity: mean displacement per step over the ring.
      const Vec2 first = ped.history.front();
      const Vec2 last = ped.history.back();
      const double steps = static_cast<double>(ped.history.size() - 1);
      const Vec2 fit_vel = (last - first) * (1.0 / (steps * wp.dt));
      const double speed = std::max(fit_vel.norm(), 0.1);
      const Vec2 perp = layout.toward_road(ped.position);
      hyps.push_back({fit_vel, 0.5});
      hyps.push_back({perp * speed, 0.3});
      hyps.push_back({{0.0, 0.0}, 0.2});
    }
    for (int t = 0; t < horizon; ++t) {
      const double radius = wp.ped_radius + 0.2 * t * wp.dt;
      for (const auto& h : hyps) {
        PredictedDisc d;
        d.center = ped.position + h.vel * (t * wp.dt);
        d.radius = radius;
        d.weight = h.weight;
        d.pedestrian = static_cast<int>(pi);
        out.steps[t].push_back(d);
      }
    }
  }
  return out;
}

CostMap build_predictive_costmap(const CostMap& base, const PredictedOccupancy& pred,
                                 const CostmapParams& cp) {
  CostMap map = base;
  const int horizon = std::max(pred.horizon_steps, 1);
  for (int t = 0; t < pred.horizon_steps; ++t) {
    const double decay = 1.0 - static_cast<double>(t) / horizon;
    for (const auto& d : pred.steps[t]) {
      const double add = cp.c_pred * d.weight * decay;
      const int i0 = std::max(0, map.to_cell_x(d.center.x - d.radius) - 1);
      const int i1 = std::min(map.width - 1, map.to_cell_x(d.center.x + d.radius) + 1);
      const int j0 = std::max(0, map.to_cell_y(d.center.y - d.radius) - 1);
      const int j1 = std::min(map.height - 1, map.to_cell_y(d.center.y + d.radius) + 1);
      const double r_sq = d.radius * d.radius;
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          const int idx = map.index(i, j);
          if (!std::isfinite(map.cells[idx])) continue;  // occupied now stays infinite
          const Vec2 c = map.cell_center(i, j);
          if ((c - d.center).norm_sq() <= r_sq) map.cells[idx] += add;
        }
      }
    }
  }
  return map;
}

void dump_costmap_pgm(const CostMap& map, const std::string& pgm_path,
                      const std::string& meta_path) {
  double max_finite = 0.0;
  for (const double c : map.cells) {
    if (std::isfinite(c)) max_finite = std::max(max_finite, c);
  }
  if (max_finite <= 0.0) max_finite = 1.0;

  std::ostringstream pgm;
  pgm << "P2\n" << map.width << " " << map.height << "\n255\n";
  // Row 0 at the top of the image corresponds to the max-y cell row.
  for (int j = map.height - 1; j >= 0; --j) {
    for (int i = 0; i < map.width; ++i) {
      const double c = map.cost_at(i, j);
      int v = std::isfinite(c)
                  ? 255 - static_cast<int>(std::lround(200.0 * c / max_finite))
                  : 0;
      v = std::clamp(v, 0, 255);
      pgm << v << (i + 1 == map.width ? "" : " ");
    }
    pgm << "\n";
  }
  write_file(pgm_path, pgm.str());

  std::ostringstream meta;
  meta << "format: 1\n"
       << "origin_x: " << format_double(map.origin.x) << "\n"
       << "origin_y: " << format_double(map.origin.y) << "\n"
       << "resolution: " << format_double(map.resolution) << "\n"
       << "width: " << map.width << "\n"
       << "height: " << map.height << "\n"
       << "max_finite_cost: " << format_double(max_finite) << "\n";
  write_file(meta_path, meta.str());
}

}  // namespace hylear
