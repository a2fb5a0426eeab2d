#ifndef HYLEAR_SVG_HPP_
#define HYLEAR_SVG_HPP_

#include <string>
#include <vector>

#include "hylear/costmap.hpp"
#include "hylear/planner.hpp"
#include "hylear/risk.hpp"

namespace hylear {

// Minimal SVG writers for benchmark charts and plan overlays.

struct BarDatum {
  std::string label;
  double value = 0.0;
};

std::string svg_bar_chart(const std::string& title, const std::vector<BarDatum>& data);

// Cost map as grayscale cells with the k paths, hazards and an optional risk
// heat layer drawn on top.
std::string svg_plan_overlay(const CostMap& map, const std::vector<Path>& paths,
                             const WorldState& obs, const std::vector<Hazard>& hazards,
                             const RiskParams& rp);

}  // namespace hylear

#endif  // HYLEAR_SVG_HPP_
