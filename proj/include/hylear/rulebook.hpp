#ifndef HYLEAR_RULEBOOK_HPP_
#define HYLEAR_RULEBOOK_HPP_

#include <array>
#include <vector>

#include "hylear/risk.hpp"

namespace hylear {

// Per-rule violation magnitudes in priority order: sidewalk meters, risk
// above the threshold, mean lane-centerline deviation, path length.
struct ViolationVector {
  std::array<double, 4> scores{0.0, 0.0, 0.0, 0.0};

  double sidewalk_meters() const { return scores[0]; }
  double risk_excess() const { return scores[1]; }
  double lane_deviation() const { return scores[2]; }
  double path_length() const { return scores[3]; }
};

ViolationVector score_violations(const Path& path, const PathRisk& risk,
                                 const RoadLayout& layout, const RiskParams& rp);

struct Candidate {
  Path path;
  ViolationVector violations;
};

// Lexicographic minimum with tie tolerance tau: components are quantized to
// multiples of tau before comparison, so two scores land in the same bucket
// only when they differ by less than tau. Final tie-break is source-map
// order (Base < Sidewalk < Predictive).
int select_path_index(const std::vector<Candidate>& candidates, const RulebookParams& rb);

const Candidate& select_path(const std::vector<Candidate>& candidates,
                             const RulebookParams& rb);

}  // namespace hylear

#endif  // HYLEAR_RULEBOOK_HPP_
