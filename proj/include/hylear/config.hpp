#ifndef HYLEAR_CONFIG_HPP_
#define HYLEAR_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hylear {

// Kinematics and episode limits.
struct WorldParams {
  double dt = 0.1;              // s, fixed step
  double wheelbase = 2.7;       // m
  double v_max = 8.3;           // m/s (30 km/h)
  double steer_max = 0.6;       // rad
  double t_max = 60.0;          // s, episode timeout
  double goal_radius = 2.0;     // m
  double d_near = 1.5;          // m, near-miss distance
  double v_near = 1.0;          // m/s, near-miss speed gate
  double car_length = 4.4;      // m
  double car_width = 1.8;       // m
  double ped_radius = 0.3;      // m
  double ped_v_max = 3.0;       // m/s
  double ped_noise_sigma = 0.0; // m/s, per-step velocity noise
  int ped_history = 8;          // ring length H
};

struct CostmapParams {
  double resolution = 0.25;     // m/cell
  double window = 60.0;         // m, square map side
  double forward_offset = 15.0; // m, window center this far ahead of the car
  double c_lane = 1.0;
  double c_sidewalk = 10.0;
  double c_sidewalk_free = 2.0;
  double c_offroad = 50.0;
  double c_pred = 25.0;
  double cost_floor = 1.0;
  double ped_margin = 0.9;      // m added to ped radius when rasterizing as obstacle
  double obstacle_inflation = 0.9;  // m, half car width, for static rectangles
  double ped_clear = 3.0;       // m, sidewalk counts as free beyond this
  int predict_horizon = 20;     // steps (2 s at dt=0.1)
};

struct PlannerParams {
  int heading_bins = 16;
  std::vector<double> weight_schedule{2.0, 1.5, 1.2, 1.0};
  int max_expansions = 20000;   // expansion-count budget mode
  double deadline_ms = 0.0;     // > 0 switches to wall-clock budget
  double goal_xy_tol = 1.0;     // m
  double goal_heading_tol = 3.14159265358979323846 / 8.0;
  double lookahead = 4.0;       // m, pure pursuit
};

struct RiskParams {
  double sigma_long_base = 2.0;   // sigma_par = base + speed_scale * speed
  double sigma_long_speed = 0.5;
  double sigma_lat = 1.5;
  double amplitude = 0.95;
  double ped_weight = 1.0;
  double obstacle_weight = 0.5;
  double risk_threshold = 0.1;
};

struct RulebookParams {
  // Priority order, highest first. Entries name the four rules.
  std::vector<std::string> priorities{"avoid_sidewalk", "minimize_risk", "keep_lane",
                                      "shortest_path"};
  double tau = 1e-6;
};

struct PomdpParams {
  double gamma = 0.99;
  int num_scenarios = 32;       // K
  int depth = 10;               // D
  int max_nodes = 20000;        // node-count budget mode
  double max_ms = 0.0;          // > 0 switches to wall-clock budget
  double sigma_obs = 0.1;       // m, observation likelihood noise
  double sigma_model = 0.05;    // m/s, rollout pedestrian velocity noise
  double occluded_mix = 0.05;   // lambda, per-step mixing toward uniform
  double phantom_prior = 0.2;   // existence probability behind an occluder
  double ped_nominal_speed = 1.4;
  double belief_floor = 1e-6;
};

struct SacParams {
  double alpha = 0.2;           // entropy temperature
  double lr = 3e-4;
  double gamma = 0.99;
  double tau_polyak = 0.005;
  int buffer_capacity = 100000;
  int batch_size = 64;
  int anneal_steps = 20000;     // N_anneal for the interposed mixture
  double t_plan = 2.0;          // softmax temperature over planner values
  int warmup_steps = 500;       // buffer fill before updates start
  int update_every = 1;         // env steps per gradient step
  int checkpoint_every = 5000;  // env steps
  int obs_cells = 32;           // H = W
  double obs_resolution = 0.5;  // m/cell after downsampling
  int obs_forward_cells = 8;    // crop center this many cells ahead
  std::array<int, 3> conv_channels{16, 32, 32};
  int fc_width = 128;
  double r_min = -100.0;
  double r_max = 100.0;
};

struct BenchmarkParams {
  int episodes_per_scene = 1;
  int threads = 1;
  bool wall_timing = true;      // false writes exec_ms as 0 for byte-stable output
  uint64_t base_seed = 1;
  std::vector<std::string> family_files;  // scenario family documents
};

struct TrainParams {
  int total_steps = 30000;
  std::vector<std::string> family_files;
  uint64_t seed = 1;
  int log_every = 500;
  int threads = 1;
};

struct Config {
  int format = 1;
  WorldParams world;
  CostmapParams costmap;
  PlannerParams planner;
  RiskParams risk;
  RulebookParams rulebook;
  PomdpParams pomdp;
  SacParams sac;
  BenchmarkParams benchmark;
  TrainParams train;
};

// Loads a config document; missing fields keep their defaults.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string config_to_json(const Config& c);

}  // namespace hylear

#endif  // HYLEAR_CONFIG_HPP_
