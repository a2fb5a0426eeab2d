#include "hylear/benchmark.hpp"

#include <algorithm>
#include <filesystem>

#include "hylear/io_util.hpp"
#include "hylear/parallel.hpp"
#include "hylear/policies.hpp"
#include "hylear/svg.hpp"

namespace hylear {

namespace fs = std::filesystem;

std::vector<ScenarioFamily> load_families(const std::vector<std::string>& files) {
  if (files.empty()) throw ConfigError("no scenario family files configured");
  std::vector<ScenarioFamily> fams;
  for (const auto& f : files) fams.push_back(load_family(f));
  return fams;
}

namespace {

void write_charts(const Metrics& m, const std::string& out_dir) {
  const auto chart = [&](const std::string& name, auto getter) {
    std::vector<BarDatum> data;
    for (const auto& f : m.families) data.push_back({f.family, getter(f)});
    write_file(out_dir + "/" + name + ".svg", svg_bar_chart(name, data));
  };
  chart("crash_pct", [](const FamilyMetrics& f) { return f.crash_pct; });
  chart("near_miss_pct", [](const FamilyMetrics& f) { return f.near_miss_pct; });
  chart("ttg_s", [](const FamilyMetrics& f) { return f.mean_ttg; });
  chart("comfort", [](const FamilyMetrics& f) { return f.mean_comfort; });
  write_file(out_dir + "/exec_ms.svg",
             svg_bar_chart("exec_ms", {{"mean_per_decision", m.mean_exec_ms}}));
}

}  // namespace

BenchmarkResult run_benchmark(const RunConfig& rc) {
  const Config& cfg = rc.config;
  // Configuration problems must surface before any episode runs.
  const auto families = load_families(cfg.benchmark.family_files);
  const uint64_t base_seed = rc.seed != 0 ? rc.seed : cfg.benchmark.base_seed;
  const auto scenarios = generate_scenarios(families, base_seed);
  const int reps = std::max(1, cfg.benchmark.episodes_per_scene);
  const int n_episodes = static_cast<int>(scenarios.size()) * reps;

  // Validates the policy spec and checkpoint up front.
  { auto probe = make_policy(rc.policy, cfg, rc.checkpoint); }

  ensure_dir(rc.out_dir);
  ensure_dir(rc.out_dir + "/traces");

  const int threads = std::max(1, cfg.benchmark.threads);
  const int slots = std::max(threads, 1);
  std::vector<EpisodeTrace> traces(n_episodes);

  parallel_for(slots, threads, [&](int64_t slot) {
    auto policy = make_policy(rc.policy, cfg, rc.checkpoint);
    for (int e = static_cast<int>(slot); e < n_episodes; e += slots) {
      const Scenario& scenario = scenarios[e / reps];
      const int rep = e % reps;
      EpisodeOptions opts;
      opts.seed = rep == 0 ? scenario.seed : Rng::derive(scenario.seed, 7000 + rep);
      opts.wall_timing = cfg.benchmark.wall_timing;
      traces[e] = run_episode(scenario, *policy, cfg.world, opts);
    }
  });

  BenchmarkResult result;
  for (int e = 0; e < n_episodes; ++e) {
    const int rep = e % reps;
    save_trace(traces[e], rc.out_dir + "/traces/" + traces[e].scenario_id + "_r" +
                              std::to_string(rep) + ".jsonl");
    result.traces.push_back(summarize_trace(traces[e]));
  }
  result.metrics = compute_metrics(result.traces);
  result.csv = metrics_csv(rc.policy, result.metrics);
  write_file(rc.out_dir + "/metrics.csv", result.csv);
  write_file(rc.out_dir + "/families.csv", family_metrics_csv(result.metrics));
  write_charts(result.metrics, rc.out_dir);
  return result;
}

BenchmarkResult report_from_traces(const std::string& trace_dir, const std::string& policy,
                                   const std::string& out_dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(trace_dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
  }
  if (files.empty()) throw IoError("no trace files in " + trace_dir);
  std::sort(files.begin(), files.end());

  BenchmarkResult result;
  for (const auto& f : files) result.traces.push_back(load_trace_summary(f));
  result.metrics = compute_metrics(result.traces);
  result.csv = metrics_csv(policy, result.metrics);
  ensure_dir(out_dir);
  write_file(out_dir + "/metrics.csv", result.csv);
  write_file(out_dir + "/families.csv", family_metrics_csv(result.metrics));
  write_charts(result.metrics, out_dir);
  return result;
}

}  // namespace hylear
