#include <iostream>

#include <CLI11.hpp>

#include "hylear/benchmark.hpp"
#include "hylear/io_util.hpp"
#include "hylear/policies.hpp"
#include "hylear/svg.hpp"
#include "hylear/train.hpp"

using namespace hylear;

namespace {

Config load_config_or_default(const std::string& path) {
  if (path.empty()) return Config{};
  return load_config(path);
}

int cmd_generate_scenarios(const std::string& set, uint64_t seed, const std::string& out) {
  ensure_dir(out);
  std::vector<ScenarioFamily> fams;
  if (set == "toy") {
    fams = builtin_toy_families();
  } else if (set == "paper") {
    fams = builtin_families();
    // Grid densities sized so 12 families yield ~30k scenes (12 * 50 * 50).
    for (auto& f : fams) {
      f.grid_speeds.clear();
      f.grid_crossing_distances.clear();
      for (int i = 0; i < 50; ++i) {
        f.grid_speeds.push_back(0.8 + 0.03 * i);
        f.grid_crossing_distances.push_back(2.0 + 0.12 * i);
      }
    }
  } else if (set == "default") {
    fams = builtin_families();
  } else {
    throw ConfigError("unknown scenario set: " + set);
  }

  std::string manifest;
  size_t total = 0;
  for (const auto& f : fams) {
    const std::string path = out + "/" + f.name + ".json";
    write_file(path, family_to_json(f));
    total += f.grid_speeds.size() * f.grid_crossing_distances.size();
    manifest += path + "\n";
  }
  write_file(out + "/families.txt", manifest);
  // Sanity expansion: validates all invariants and seed derivation.
  const auto scenarios = generate_scenarios(fams, seed == 0 ? 1 : seed);
  std::cout << "wrote " << fams.size() << " families, " << scenarios.size()
            << " scenes expand from the grids (expected " << total << ")\n";
  return 0;
}

int cmd_train(const std::string& config_path, uint64_t seed, const std::string& out) {
  Config cfg = load_config_or_default(config_path);
  if (seed != 0) cfg.train.seed = seed;
  ensure_dir(out);
  const TrainResult res = run_training(cfg, out);
  std::cout << "trained " << res.steps << " steps over " << res.episodes
            << " episodes; final checkpoint: " << res.checkpoint_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& policy,
                 const std::string& checkpoint, uint64_t seed, const std::string& out) {
  RunConfig rc;
  rc.config = load_config_or_default(config_path);
  rc.policy = policy;
  rc.checkpoint = checkpoint;
  rc.out_dir = out;
  rc.seed = seed;
  const BenchmarkResult res = run_benchmark(rc);
  std::cout << res.csv;
  return 0;
}

int cmd_plan(const std::string& config_path, const std::string& family_path, int scene,
             int time_index, bool dump_maps, bool speed, uint64_t seed,
             const std::string& out) {
  Config cfg = load_config_or_default(config_path);
  const auto family = load_family(family_path);
  const auto scenarios = generate_scenarios({family}, seed == 0 ? 1 : seed);
  if (scene < 0 || scene >= static_cast<int>(scenarios.size())) {
    throw ConfigError("scene index out of range (have " + std::to_string(scenarios.size()) +
                      " scenes)");
  }
  const Scenario& scenario = scenarios[scene];
  ensure_dir(out);

  // Roll the world forward under the planner-only policy.
  PlannerOnlyPolicy policy(cfg);
  policy.reset(scenario);
  Rng rng(scenario.seed);
  WorldState world = initial_world(scenario, scenario.layout, cfg.world);
  for (int t = 0; t < time_index; ++t) {
    world = step_world(world, policy.act(observable_world(world)), rng, cfg.world);
  }
  const WorldState obs = observable_world(world);

  SearchBudget budget;
  budget.max_expansions = cfg.planner.max_expansions;
  budget.weight_schedule = cfg.planner.weight_schedule;
  const KPathResult k = plan_k_paths(obs, scenario.layout, scenario.car_goal, budget,
                                     cfg.planner, cfg.costmap, cfg.world, 1);

  const auto hazards =
      collect_hazards(obs, scenario.layout, &k.prediction, obs.car.pose.position(), cfg.risk);
  for (const auto& path : k.paths) {
    const PathRisk r = path_risk(path, obs.car.speed, hazards, cfg.risk);
    std::cout << map_variant_name(path.source_map) << ": cost=" << format_double(path.total_cost)
              << " length=" << format_double(path.length)
              << " risk=" << format_double(r.aggregate)
              << (r.above_threshold ? " (above threshold)" : "") << "\n";
  }

  write_file(out + "/plan_overlay.svg",
             svg_plan_overlay(k.maps[0], k.paths, obs, hazards, cfg.risk));
  if (dump_maps) {
    for (int v = 0; v < 3; ++v) {
      const std::string name = map_variant_name(static_cast<MapVariant>(v));
      dump_costmap_pgm(k.maps[v], out + "/map_" + name + ".pgm",
                       out + "/map_" + name + ".txt");
    }
  }
  if (speed) {
    Belief belief = initial_belief(scenario.layout, cfg.pomdp);
    belief = update_belief(belief, {}, obs, scenario.layout, cfg.world.dt, cfg.pomdp);
    PomdpBudget pb;
    pb.num_scenarios = cfg.pomdp.num_scenarios;
    pb.depth = cfg.pomdp.depth;
    pb.max_nodes = cfg.pomdp.max_nodes;
    PomdpContext ctx;
    ctx.layout = &scenario.layout;
    ctx.goal = scenario.car_goal;
    ctx.world = cfg.world;
    ctx.params = cfg.pomdp;
    ctx.r_min = cfg.sac.r_min;
    ctx.r_max = cfg.sac.r_max;
    const auto& best = k.paths.front();
    const SpeedPlan sp = plan_speed(belief, best, obs.car, pb, ctx, scenario.seed);
    const char* names[4] = {"accelerate", "maintain", "decelerate", "hard_brake"};
    for (int a = 0; a < kNumSpeedActions; ++a) {
      std::cout << "speed value " << names[a] << ": " << format_double(sp.values[a]) << "\n";
    }
  }
  return 0;
}

int cmd_report(const std::string& traces, const std::string& policy, const std::string& out) {
  const BenchmarkResult res = report_from_traces(traces, policy, out);
  std::cout << res.csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid planning-assisted RL navigation testbed"};
  app.require_subcommand(1);
  app.fallthrough();  // global --config/--seed/--out may follow the subcommand

  std::string config_path, out_dir = "out";
  uint64_t seed = 0;
  app.add_option("--config", config_path, "config file (JSON, format 1)");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--out", out_dir, "output directory");

  auto* gen = app.add_subcommand("generate-scenarios", "write scenario family documents");
  std::string set = "default";
  gen->add_option("--set", set, "default | toy | paper");

  auto* train = app.add_subcommand("train", "interposed-learning training run");

  auto* eval = app.add_subcommand("evaluate", "benchmark a policy");
  std::string policy = "planner-only", checkpoint;
  eval->add_option("--policy", policy,
                   "hylear | planner-only | learner-only | always-accelerate | random");
  eval->add_option("--checkpoint", checkpoint, "checkpoint for learner policies");

  auto* plan = app.add_subcommand("plan", "inspect the k-path planner on one scene");
  std::string family_path;
  int scene = 0, time_index = 0;
  bool dump_maps = false, speed = false;
  plan->add_option("--family", family_path, "scenario family document")->required();
  plan->add_option("--scene", scene, "scene index within the family grid");
  plan->add_option("--time-index", time_index, "simulation steps before planning");
  plan->add_flag("--dump-maps", dump_maps, "write PGM dumps of the three cost maps");
  plan->add_flag("--speed", speed, "print POMDP root action values");

  auto* report = app.add_subcommand("report", "recompute metrics from stored traces");
  std::string traces_dir, report_policy = "unknown";
  report->add_option("--traces", traces_dir, "directory of episode traces")->required();
  report->add_option("--policy", report_policy, "policy label for the CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_scenarios(set, seed, out_dir);
    if (train->parsed()) return cmd_train(config_path, seed, out_dir);
    if (eval->parsed()) return cmd_evaluate(config_path, policy, checkpoint, seed, out_dir);
    if (plan->parsed())
      return cmd_plan(config_path, family_path, scene, time_index, dump_maps, speed, seed,
                      out_dir);
    if (report->parsed()) return cmd_report(traces_dir, report_policy, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
