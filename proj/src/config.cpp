#include "hylear/config.hpp"

#include <json.hpp>

#include "hylear/io_util.hpp"

namespace hylear {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_world(const json& j, WorldParams& p) {
  get_if(j, "dt", p.dt);
  get_if(j, "wheelbase", p.wheelbase);
  get_if(j, "v_max", p.v_max);
  get_if(j, "steer_max", p.steer_max);
  get_if(j, "t_max", p.t_max);
  get_if(j, "goal_radius", p.goal_radius);
  get_if(j, "d_near", p.d_near);
  get_if(j, "v_near", p.v_near);
  get_if(j, "car_length", p.car_length);
  get_if(j, "car_width", p.car_width);
  get_if(j, "ped_radius", p.ped_radius);
  get_if(j, "ped_v_max", p.ped_v_max);
  get_if(j, "ped_noise_sigma", p.ped_noise_sigma);
  get_if(j, "ped_history", p.ped_history);
}

void parse_costmap(const json& j, CostmapParams& p) {
  get_if(j, "resolution", p.resolution);
  get_if(j, "window", p.window);
  get_if(j, "forward_offset", p.forward_offset);
  get_if(j, "c_lane", p.c_lane);
  get_if(j, "c_sidewalk", p.c_sidewalk);
  get_if(j, "c_sidewalk_free", p.c_sidewalk_free);
  get_if(j, "c_offroad", p.c_offroad);
  get_if(j, "c_pred", p.c_pred);
  get_if(j, "cost_floor", p.cost_floor);
  get_if(j, "ped_margin", p.ped_margin);
  get_if(j, "obstacle_inflation", p.obstacle_inflation);
  get_if(j, "ped_clear", p.ped_clear);
  get_if(j, "predict_horizon", p.predict_horizon);
}

void parse_planner(const json& j, PlannerParams& p) {
  get_if(j, "heading_bins", p.heading_bins);
  get_if(j, "weight_schedule", p.weight_schedule);
  get_if(j, "max_expansions", p.max_expansions);
  get_if(j, "deadline_ms", p.deadline_ms);
  get_if(j, "goal_xy_tol", p.goal_xy_tol);
  get_if(j, "goal_heading_tol", p.goal_heading_tol);
  get_if(j, "lookahead", p.lookahead);
}

void parse_risk(const json& j, RiskParams& p) {
  get_if(j, "sigma_long_base", p.sigma_long_base);
  get_if(j, "sigma_long_speed", p.sigma_long_speed);
  get_if(j, "sigma_lat", p.sigma_lat);
  get_if(j, "amplitude", p.amplitude);
  get_if(j, "ped_weight", p.ped_weight);
  get_if(j, "obstacle_weight", p.obstacle_weight);
  get_if(j, "risk_threshold", p.risk_threshold);
}

void parse_rulebook(const json& j, RulebookParams& p) {
  get_if(j, "priorities", p.priorities);
  get_if(j, "tau", p.tau);
}

void parse_pomdp(const json& j, PomdpParams& p) {
  get_if(j, "gamma", p.gamma);
  get_if(j, "num_scenarios", p.num_scenarios);
  get_if(j, "depth", p.depth);
  get_if(j, "max_nodes", p.max_nodes);
  get_if(j, "max_ms", p.max_ms);
  get_if(j, "sigma_obs", p.sigma_obs);
  get_if(j, "sigma_model", p.sigma_model);
  get_if(j, "occluded_mix", p.occluded_mix);
  get_if(j, "phantom_prior", p.phantom_prior);
  get_if(j, "ped_nominal_speed", p.ped_nominal_speed);
  get_if(j, "belief_floor", p.belief_floor);
}

void parse_sac(const json& j, SacParams& p) {
  get_if(j, "alpha", p.alpha);
  get_if(j, "lr", p.lr);
  get_if(j, "gamma", p.gamma);
  get_if(j, "tau_polyak", p.tau_polyak);
  get_if(j, "buffer_capacity", p.buffer_capacity);
  get_if(j, "batch_size", p.batch_size);
  get_if(j, "anneal_steps", p.anneal_steps);
  get_if(j, "t_plan", p.t_plan);
  get_if(j, "warmup_steps", p.warmup_steps);
  get_if(j, "update_every", p.update_every);
  get_if(j, "checkpoint_every", p.checkpoint_every);
  get_if(j, "obs_cells", p.obs_cells);
  get_if(j, "obs_resolution", p.obs_resolution);
  get_if(j, "obs_forward_cells", p.obs_forward_cells);
  if (j.contains("conv_channels")) {
    auto v = j.at("conv_channels").get<std::vector<int>>();
    if (v.size() != 3) throw ConfigError("sac.conv_channels must have 3 entries");
    p.conv_channels = {v[0], v[1], v[2]};
  }
  get_if(j, "fc_width", p.fc_width);
  get_if(j, "r_min", p.r_min);
  get_if(j, "r_max", p.r_max);
}

void parse_benchmark(const json& j, BenchmarkParams& p) {
  get_if(j, "episodes_per_scene", p.episodes_per_scene);
  get_if(j, "threads", p.threads);
  get_if(j, "wall_timing", p.wall_timing);
  get_if(j, "base_seed", p.base_seed);
  get_if(j, "family_files", p.family_files);
}

void parse_train(const json& j, TrainParams& p) {
  get_if(j, "total_steps", p.total_steps);
  get_if(j, "family_files", p.family_files);
  get_if(j, "seed", p.seed);
  get_if(j, "log_every", p.log_every);
  get_if(j, "threads", p.threads);
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  Config c;
  get_if(j, "format", c.format);
  if (c.format != 1) throw ConfigError("unsupported config format: " + std::to_string(c.format));
  if (j.contains("world")) parse_world(j["world"], c.world);
  if (j.contains("costmap")) parse_costmap(j["costmap"], c.costmap);
  if (j.contains("planner")) parse_planner(j["planner"], c.planner);
  if (j.contains("risk")) parse_risk(j["risk"], c.risk);
  if (j.contains("rulebook")) parse_rulebook(j["rulebook"], c.rulebook);
  if (j.contains("pomdp")) parse_pomdp(j["pomdp"], c.pomdp);
  if (j.contains("sac")) parse_sac(j["sac"], c.sac);
  if (j.contains("benchmark")) parse_benchmark(j["benchmark"], c.benchmark);
  if (j.contains("train")) parse_train(j["train"], c.train);

  if (c.planner.weight_schedule.empty()) throw ConfigError("planner.weight_schedule empty");
  for (size_t i = 0; i + 1 < c.planner.weight_schedule.size(); ++i) {
    if (c.planner.weight_schedule[i] <= c.planner.weight_schedule[i + 1])
      throw ConfigError("planner.weight_schedule must be strictly decreasing");
  }
  if (c.planner.weight_schedule.back() < 1.0)
    throw ConfigError("planner.weight_schedule entries must be >= 1");
  if (c.rulebook.priorities.size() != 4) throw ConfigError("rulebook.priorities must list 4 rules");
  return c;
}

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_json(const Config& c) {
  json j;
  j["format"] = c.format;
  j["world"] = {{"dt", c.world.dt},
                {"wheelbase", c.world.wheelbase},
                {"v_max", c.world.v_max},
                {"steer_max", c.world.steer_max},
                {"t_max", c.world.t_max},
                {"goal_radius", c.world.goal_radius},
                {"d_near", c.world.d_near},
                {"v_near", c.world.v_near},
                {"car_length", c.world.car_length},
                {"car_width", c.world.car_width},
                {"ped_radius", c.world.ped_radius},
                {"ped_v_max", c.world.ped_v_max},
                {"ped_noise_sigma", c.world.ped_noise_sigma},
                {"ped_history", c.world.ped_history}};
  j["costmap"] = {{"resolution", c.costmap.resolution},
                  {"window", c.costmap.window},
                  {"forward_offset", c.costmap.forward_offset},
                  {"c_lane", c.costmap.c_lane},
                  {"c_sidewalk", c.costmap.c_sidewalk},
                  {"c_sidewalk_free", c.costmap.c_sidewalk_free},
                  {"c_offroad", c.costmap.c_offroad},
                  {"c_pred", c.costmap.c_pred},
                  {"cost_floor", c.costmap.cost_floor},
                  {"ped_margin", c.costmap.ped_margin},
                  {"obstacle_inflation", c.costmap.obstacle_inflation},
                  {"ped_clear", c.costmap.ped_clear},
                  {"predict_horizon", c.costmap.predict_horizon}};
  j["planner"] = {{"heading_bins", c.planner.heading_bins},
                  {"weight_schedule", c.planner.weight_schedule},
                  {"max_expansions", c.planner.max_expansions},
                  {"deadline_ms", c.planner.deadline_ms},
                  {"goal_xy_tol", c.planner.goal_xy_tol},
                  {"goal_heading_tol", c.planner.goal_heading_tol},
                  {"lookahead", c.planner.lookahead}};
  j["risk"] = {{"sigma_long_base", c.risk.sigma_long_base},
               {"sigma_long_speed", c.risk.sigma_long_speed},
               {"sigma_lat", c.risk.sigma_lat},
               {"amplitude", c.risk.amplitude},
               {"ped_weight", c.risk.ped_weight},
               {"obstacle_weight", c.risk.obstacle_weight},
               {"risk_threshold", c.risk.risk_threshold}};
  j["rulebook"] = {{"priorities", c.rulebook.priorities}, {"tau", c.rulebook.tau}};
  j["pomdp"] = {{"gamma", c.pomdp.gamma},
                {"num_scenarios", c.pomdp.num_scenarios},
                {"depth", c.pomdp.depth},
                {"max_nodes", c.pomdp.max_nodes},
                {"max_ms", c.pomdp.max_ms},
                {"sigma_obs", c.pomdp.sigma_obs},
                {"sigma_model", c.pomdp.sigma_model},
                {"occluded_mix", c.pomdp.occluded_mix},
                {"phantom_prior", c.pomdp.phantom_prior},
                {"ped_nominal_speed", c.pomdp.ped_nominal_speed},
                {"belief_floor", c.pomdp.belief_floor}};
  j["sac"] = {{"alpha", c.sac.alpha},
              {"lr", c.sac.lr},
              {"gamma", c.sac.gamma},
              {"tau_polyak", c.sac.tau_polyak},
              {"buffer_capacity", c.sac.buffer_capacity},
              {"batch_size", c.sac.batch_size},
              {"anneal_steps", c.sac.anneal_steps},
              {"t_plan", c.sac.t_plan},
              {"warmup_steps", c.sac.warmup_steps},
              {"update_every", c.sac.update_every},
              {"checkpoint_every", c.sac.checkpoint_every},
              {"obs_cells", c.sac.obs_cells},
              {"obs_resolution", c.sac.obs_resolution},
              {"obs_forward_cells", c.sac.obs_forward_cells},
              {"conv_channels", std::vector<int>{c.sac.conv_channels[0], c.sac.conv_channels[1],
                                                 c.sac.conv_channels[2]}},
              {"fc_width", c.sac.fc_width},
              {"r_min", c.sac.r_min},
              {"r_max", c.sac.r_max}};
  j["benchmark"] = {{"episodes_per_scene", c.benchmark.episodes_per_scene},
                    {"threads", c.benchmark.threads},
                    {"wall_timing", c.benchmark.wall_timing},
                    {"base_seed", c.benchmark.base_seed},
                    {"family_files", c.benchmark.family_files}};
  j["train"] = {{"total_steps", c.train.total_steps},
                {"family_files", c.train.family_files},
                {"seed", c.train.seed},
                {"log_every", c.train.log_every},
                {"threads", c.train.threads}};
  return j.dump(2);
}

}  // namespace hylear
