#include "hylear/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hylear/io_util.hpp"

namespace hylear {

namespace {

constexpr double kJerkRef = 10.0;  // m/s^3
constexpr double kKappa = 0.5;     // comfort ceiling 1/kappa = 2.0

}  // namespace

std::optional<double> comfort(const TraceSummary& trace) {
  // Jerk needs a second difference: at least 2 acceleration samples,
  // i.e. at least 3 trace states.
  if (trace.accelerations.size() < 2) return std::nullopt;
  double jerk_sum = 0.0;
  for (size_t i = 1; i < trace.accelerations.size(); ++i) {
    jerk_sum += std::abs(trace.accelerations[i] - trace.accelerations[i - 1]) / trace.dt;
  }
  const double mean_jerk = jerk_sum / static_cast<double>(trace.accelerations.size() - 1);
  const double j_norm = std::clamp(mean_jerk / kJerkRef, 0.0, 1.0);

  double risk_sum = 0.0;
  for (const double r : trace.risk_series) risk_sum += r;
  const double rho = trace.risk_series.empty()
                         ? 0.0
                         : risk_sum / static_cast<double>(trace.risk_series.size());

  return 1.0 / (kKappa + 0.5 * j_norm + 0.5 * rho);
}

Metrics compute_metrics(const std::vector<TraceSummary>& traces) {
  if (traces.empty()) throw ConfigError("compute_metrics: no traces");

  std::map<std::string, std::vector<const TraceSummary*>> by_family;
  for (const auto& t : traces) by_family[t.family].push_back(&t);

  Metrics m;
  int total_eps = 0, total_crashes = 0, total_nm = 0;
  double ttg_sum = 0.0;
  int ttg_n = 0;
  double comfort_sum = 0.0;
  int comfort_n = 0;
  double exec_sum = 0.0;
  int64_t exec_n = 0;

  for (const auto& [family, list] : by_family) {
    if (list.empty()) throw ConfigError("compute_metrics: empty family " + family);
    FamilyMetrics fm;
    fm.family = family;
    fm.episodes = static_cast<int>(list.size());
    double f_ttg = 0.0;
    int f_ttg_n = 0;
    double f_comfort = 0.0;
    int f_comfort_n = 0;
    for (const auto* t : list) {
      const bool crash = t->outcome == Outcome::Crash;
      if (crash) ++fm.crashes;
      if (t->had_near_miss) ++fm.near_miss_episodes;
      if (t->outcome == Outcome::Goal || t->outcome == Outcome::NearMissGoal) {
        f_ttg += t->ttg;
        ++f_ttg_n;
      }
      if (const auto c = comfort(*t)) {
        f_comfort += *c;
        ++f_comfort_n;
      }
      for (const double ms : t->decision_ms) {
        exec_sum += ms;
        ++exec_n;
      }
    }
    fm.crash_pct = 100.0 * fm.crashes / fm.episodes;
    fm.near_miss_pct = 100.0 * fm.near_miss_episodes / fm.episodes;
    fm.mean_ttg = f_ttg_n > 0 ? f_ttg / f_ttg_n : 0.0;
    fm.mean_comfort = f_comfort_n > 0 ? f_comfort / f_comfort_n : 0.0;

    if (fm.crash_pct < kSiCrashThreshold && fm.near_miss_pct < kSiNearMissThreshold) {
      ++m.safety_index;
    }
    total_eps += fm.episodes;
    total_crashes += fm.crashes;
    total_nm += fm.near_miss_episodes;
    ttg_sum += f_ttg;
    ttg_n += f_ttg_n;
    comfort_sum += f_comfort;
    comfort_n += f_comfort_n;
    m.families.push_back(fm);
  }

  m.crash_pct = 100.0 * total_crashes / total_eps;
  m.near_miss_pct = 100.0 * total_nm / total_eps;
  m.mean_ttg = ttg_n > 0 ? ttg_sum / ttg_n : 0.0;
  m.mean_comfort = comfort_n > 0 ? comfort_sum / comfort_n : 0.0;
  m.mean_exec_ms = exec_n > 0 ? exec_sum / static_cast<double>(exec_n) : 0.0;
  return m;
}

std::string metrics_csv(const std::string& policy, const Metrics& m) {
  std::ostringstream out;
  out << "policy,si,crash_pct,near_miss_pct,ttg_s,comfort,exec_ms\n";
  out << policy << "," << m.safety_index << "," << format_double(m.crash_pct) << ","
      << format_double(m.near_miss_pct) << "," << format_double(m.mean_ttg) << ","
      << format_double(m.mean_comfort) << "," << format_double(m.mean_exec_ms) << "\n";
  return out.str();
}

std::string family_metrics_csv(const Metrics& m) {
  std::ostringstream out;
  out << "family,episodes,crash_pct,near_miss_pct,ttg_s,comfort\n";
  for (const auto& f : m.families) {
    out << f.family << "," << f.episodes << "," << format_double(f.crash_pct) << ","
        << format_double(f.near_miss_pct) << "," << format_double(f.mean_ttg) << ","
        << format_double(f.mean_comfort) << "\n";
  }
  return out.str();
}

}  // namespace hylear
