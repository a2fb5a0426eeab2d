#include "hylear/train.hpp"

#include <algorithm>
#include <sstream>

#include "hylear/benchmark.hpp"
#include "hylear/io_util.hpp"
#include "hylear/policies.hpp"

namespace hylear {

namespace {

constexpr size_t kCarHistory = 20;

}  // namespace

TrainResult run_training(const Config& cfg, const std::string& out_dir) {
  const auto families = load_families(cfg.train.family_files);
  const auto scenarios = generate_scenarios(families, cfg.train.seed);
  if (scenarios.empty()) throw ConfigError("no training scenarios");
  ensure_dir(out_dir);

  SacState sac = make_sac_state(cfg.sac, cfg.train.seed);
  ReplayBuffer buffer(cfg.sac.buffer_capacity);
  HybridPlannerCore core(cfg);

  Rng act_rng(Rng::derive(cfg.train.seed, 1));
  Rng batch_rng(Rng::derive(cfg.train.seed, 2));
  Rng order_rng(Rng::derive(cfg.train.seed, 3));

  std::ostringstream loss_log;
  loss_log << "step,beta,j_v,j_q,j_pi\n";
  std::ostringstream episode_log;
  episode_log << "episode,end_step,scenario,outcome,return,ttg\n";

  PomdpBudget speed_budget;
  speed_budget.num_scenarios = cfg.pomdp.num_scenarios;
  speed_budget.depth = cfg.pomdp.depth;
  speed_budget.max_nodes = cfg.pomdp.max_nodes;
  speed_budget.max_ms = cfg.pomdp.max_ms;

  TrainResult result;
  int global_step = 0;
  int episode = 0;
  Losses last_losses;

  while (global_step < cfg.train.total_steps) {
    // Shuffled scenario order, reshuffled each sweep.
    const size_t idx = order_rng.uniform_int(scenarios.size());
    const Scenario& scenario = scenarios[idx];
    core.reset(scenario);

    Rng world_rng(Rng::derive(scenario.seed, 40 + episode));
    WorldState world = initial_world(scenario, scenario.layout, cfg.world);

    PomdpContext ctx;
    ctx.layout = &scenario.layout;
    ctx.goal = scenario.car_goal;
    ctx.world = cfg.world;
    ctx.params = cfg.pomdp;
    ctx.r_min = cfg.sac.r_min;
    ctx.r_max = cfg.sac.r_max;

    std::deque<Vec2> car_history;
    double prev_reward_obs = 0.0;
    SpeedAction prev_action = SpeedAction::Maintain;
    std::shared_ptr<const Observation> pending_obs;
    SpeedAction pending_action = SpeedAction::Maintain;
    double pending_reward = 0.0;
    std::optional<WorldState> prev_obs_world;
    std::optional<Path> prev_path;
    double episode_return = 0.0;
    std::string outcome = "timeout";
    double ttg = -1.0;
    bool near_miss_seen = false;

    const int max_steps = static_cast<int>(cfg.world.t_max / cfg.world.dt + 0.5);
    for (int step = 0; step < max_steps && global_step < cfg.train.total_steps; ++step) {
      const WorldState obs = observable_world(world);
      auto plan = core.plan(obs);

      ControlAction control;
      std::shared_ptr<const Observation> obs_enc;
      if (plan.fallback) {
        control = ControlAction{0.0, SpeedAction::HardBrake};
        pending_obs.reset();  // chain broken; drop the dangling transition
      } else {
        if (prev_obs_world && prev_path) {
          ControlAction pa{0.0, prev_action};
          prev_reward_obs = core.observable_reward(*prev_obs_world, pa, obs, *prev_path);
        }
        car_history.push_back(obs.car.pose.position());
        while (car_history.size() > kCarHistory) car_history.pop_front();

        EncodeInputs in;
        in.obs_world = &obs;
        in.source_map = &plan.selected_map;
        in.selected_path = &plan.path;
        in.prediction = &plan.prediction;
        in.car_history = &car_history;
        in.prev_reward = prev_reward_obs;
        in.speed = obs.car.speed;
        in.prev_action = prev_action;
        obs_enc = std::make_shared<Observation>(
            encode_observation(in, cfg.sac, cfg.world, cfg.costmap));

        // Complete the previous step's transition now that o_{t+1} exists.
        if (pending_obs) {
          buffer.push(Transition{pending_obs, pending_action, pending_reward, obs_enc, false});
        }

        const SpeedPlan sp = plan_speed(core.belief(), plan.path, obs.car, speed_budget, ctx,
                                        Rng::derive(scenario.seed, 90000 + step));
        const double beta =
            std::min(1.0, static_cast<double>(global_step) /
                              std::max(1, cfg.sac.anneal_steps));
        const ActResult ar =
            act(*obs_enc, sac, cfg.sac, &sp.values, beta, ActMode::Train, act_rng);
        control = ControlAction{plan.steering, ar.action};
      }

      const WorldState next = step_world(world, control, world_rng, cfg.world);
      const auto events = detect_events(next, scenario.car_goal, cfg.world);
      const double r = reward(world, control, next, events,
                              plan.fallback ? Path{} : plan.path, cfg.sac.r_min, cfg.sac.r_max);
      episode_return += r;
      const bool crashed = events.count(EventKind::Crash) > 0;
      const bool reached = events.count(EventKind::Goal) > 0;
      if (events.count(EventKind::NearMiss)) near_miss_seen = true;
      const bool done = crashed || reached;

      if (obs_enc) {
        if (done) {
          // Terminal: bootstrap is masked, o_{t+1} is a placeholder.
          buffer.push(Transition{obs_enc, control.speed_action, r, obs_enc, true});
          pending_obs.reset();
        } else {
          pending_obs = obs_enc;
          pending_action = control.speed_action;
          pending_reward = r;
        }
        prev_action = control.speed_action;
        prev_obs_world = obs;
        prev_path = plan.path;
      }

      world = next;
      ++global_step;

      if (buffer.size() >= std::max(cfg.sac.batch_size, cfg.sac.warmup_steps) &&
          global_step % std::max(1, cfg.sac.update_every) == 0) {
        const auto batch = buffer.sample(cfg.sac.batch_size, batch_rng);
        last_losses = sac_update(sac, batch, cfg.sac, cfg.train.threads);
      }
      if (global_step % std::max(1, cfg.train.log_every) == 0) {
        const double beta = std::min(
            1.0, static_cast<double>(global_step) / std::max(1, cfg.sac.anneal_steps));
        loss_log << global_step << "," << format_double(beta) << ","
                 << format_double(last_losses.j_v) << "," << format_double(last_losses.j_q)
                 << "," << format_double(last_losses.j_pi) << "\n";
      }
      if (global_step % std::max(1, cfg.sac.checkpoint_every) == 0) {
        save_checkpoint(sac.live, out_dir + "/checkpoint_" + std::to_string(global_step) +
                                      ".bin");
      }

      if (crashed) {
        outcome = "crash";
        break;
      }
      if (reached) {
        outcome = near_miss_seen ? "near_miss_goal" : "goal";
        ttg = next.time;
        break;
      }
    }

    episode_log << episode << "," << global_step << "," << scenario.id << "," << outcome << ","
                << format_double(episode_return) << "," << format_double(ttg) << "\n";
    ++episode;
  }

  result.steps = global_step;
  result.episodes = episode;
  result.checkpoint_path = out_dir + "/checkpoint_final.bin";
  save_checkpoint(sac.live, result.checkpoint_path);
  write_file(out_dir + "/train_losses.csv", loss_log.str());
  write_file(out_dir + "/train_episodes.csv", episode_log.str());
  return result;
}

}  // namespace hylear
