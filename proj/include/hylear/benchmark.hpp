#ifndef HYLEAR_BENCHMARK_HPP_
#define HYLEAR_BENCHMARK_HPP_

#include <string>
#include <vector>

#include "hylear/config.hpp"
#include "hylear/metrics.hpp"
#include "hylear/scenario.hpp"

namespace hylear {

struct RunConfig {
  Config config;
  std::string policy = "planner-only";  // hylear | planner-only | learner-only |
                                        // always-accelerate | random
  std::string checkpoint;
  std::string out_dir;
  uint64_t seed = 0;  // overrides config.benchmark.base_seed when nonzero
};

struct BenchmarkResult {
  Metrics metrics;
  std::vector<TraceSummary> traces;
  std::string csv;
};

// Runs every scenario under the configured policy, persists traces, the
// Table-style metrics CSV, per-family CSV, timing sidecar and SVG charts.
// Episodes run across a worker pool with per-episode seeds; aggregation is
// single-threaded and deterministic (bit-identical CSV when wall timing is
// off).
BenchmarkResult run_benchmark(const RunConfig& rc);

// Re-derives metrics from persisted traces; matches the live run bit-exactly
// (exec_ms comes from the timing sidecar when present, else 0).
BenchmarkResult report_from_traces(const std::string& trace_dir, const std::string& policy,
                                   const std::string& out_dir);

std::vector<ScenarioFamily> load_families(const std::vector<std::string>& files);

}  // namespace hylear

#endif  // HYLEAR_BENCHMARK_HPP_
