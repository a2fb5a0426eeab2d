#include "hylear/rulebook.hpp"

#include <cmath>

#include "hylear/io_util.hpp"

namespace hylear {

namespace {

int rule_slot(const std::string& name) {
  if (name == "avoid_sidewalk") return 0;
  if (name == "minimize_risk") return 1;
  if (name == "keep_lane") return 2;
  if (name == "shortest_path") return 3;
  throw ConfigError("unknown rulebook rule: " + name);
}

int64_t quantize(double v, double tau) {
  return static_cast<int64_t>(std::llround(v / tau));
}

}  // namespace

ViolationVector score_violations(const Path& path, const PathRisk& risk,
                                 const RoadLayout& layout, const RiskParams& rp) {
  ViolationVector v;
  if (path.poses.empty()) return v;

  double sidewalk_len = 0.0;
  double deviation_sum = 0.0;
  for (size_t k = 0; k < path.poses.size(); ++k) {
    const Vec2 p = path.poses[k].position();
    if (k + 1 < path.poses.size()) {
      const double seg = (path.poses[k + 1].position() - p).norm();
      if (layout.classify(p) == CellClass::Sidewalk) sidewalk_len += seg;
    }
    deviation_sum += layout.distance_to_nearest_centerline(p);
  }
  v.scores[0] = sidewalk_len;
  v.scores[1] = std::max(0.0, risk.aggregate - rp.risk_threshold);
  v.scores[2] = deviation_sum / static_cast<double>(path.poses.size());
  v.scores[3] = path.length;
  return v;
}

int select_path_index(const std::vector<Candidate>& candidates, const RulebookParams& rb) {
  if (candidates.empty()) throw PolicyError("select_path: no candidates");
  std::array<int, 4> order{};
  for (int k = 0; k < 4; ++k) order[k] = rule_slot(rb.priorities[k]);

  // Less-than over (quantized violation tuple, source map). Quantization
  // makes the tie tolerance a transitive total order.
  const auto less_than = [&](const Candidate& a, const Candidate& b) {
    for (int k = 0; k < 4; ++k) {
      const int64_t qa = quantize(a.violations.scores[order[k]], rb.tau);
      const int64_t qb = quantize(b.violations.scores[order[k]], rb.tau);
      if (qa != qb) return qa < qb;
      // tied within tau: decided by the next priority
    }
    return static_cast<int>(a.path.source_map) < static_cast<int>(b.path.source_map);
  };

  int best = 0;
  for (int c = 1; c < static_cast<int>(candidates.size()); ++c) {
    if (less_than(candidates[c], candidates[best])) best = c;
  }
  return best;
}

const Candidate& select_path(const std::vector<Candidate>& candidates,
                             const RulebookParams& rb) {
  return candidates[select_path_index(candidates, rb)];
}

}  // namespace hylear
