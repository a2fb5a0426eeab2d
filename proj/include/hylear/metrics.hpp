#ifndef HYLEAR_METRICS_HPP_
#define HYLEAR_METRICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hylear/episode.hpp"

namespace hylear {

struct FamilyMetrics {
  std::string family;
  int episodes = 0;
  int crashes = 0;
  int near_miss_episodes = 0;
  double crash_pct = 0.0;
  double near_miss_pct = 0.0;
  double mean_ttg = 0.0;      // over goal-reaching episodes; 0 when none
  double mean_comfort = 0.0;  // over episodes with defined comfort
};

struct Metrics {
  std::vector<FamilyMetrics> families;  // sorted by family name
  int safety_index = 0;                 // families with crash% < 5 and near-miss% < 10
  double crash_pct = 0.0;               // episode-weighted overall
  double near_miss_pct = 0.0;
  double mean_ttg = 0.0;
  double mean_comfort = 0.0;
  double mean_exec_ms = 0.0;            // per decision
};

// Ride comfort: 1 / (kappa + 0.5*J + 0.5*rho) with J the mean |jerk|
// normalized by 10 m/s^3 and clamped to [0,1], rho the mean per-step risk.
// Undefined (nullopt) for traces shorter than three states.
std::optional<double> comfort(const TraceSummary& trace);

constexpr double kSiCrashThreshold = 5.0;      // percent, strict <
constexpr double kSiNearMissThreshold = 10.0;  // percent, strict <

Metrics compute_metrics(const std::vector<TraceSummary>& traces);

// Table-style CSV: header
// policy,si,crash_pct,near_miss_pct,ttg_s,comfort,exec_ms
std::string metrics_csv(const std::string& policy, const Metrics& m);
std::string family_metrics_csv(const Metrics& m);

}  // namespace hylear

#endif  // HYLEAR_METRICS_HPP_
