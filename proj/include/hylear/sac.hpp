#ifndef HYLEAR_SAC_HPP_
#define HYLEAR_SAC_HPP_

#include <deque>
#include <memory>

#include "hylear/costmap.hpp"
#include "hylear/nn.hpp"
#include "hylear/planner.hpp"
#include "hylear/reward.hpp"

namespace hylear {

// Learner input: a multi-channel grid cropped from the selected path's cost
// map, rotated into the car frame, plus a few scalars. The grid is stored
// quantized to 8 bits; every channel value is in [0, 1].
// Channels: 0 drivability class, 1 normalized cost, 2 car past path,
// 3 car future (selected) path, 4 pedestrian past positions, 5 predicted
// pedestrian occupancy.
struct Observation {
  int channels = 6;
  int hw = 32;
  std::vector<uint8_t> grid;   // channel-major, quantized
  std::vector<double> scalars; // prev reward (mapped to [0,1]), speed/v_max, prev action one-hot

  std::vector<double> grid_double() const {
    std::vector<double> g(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) g[i] = grid[i] / 255.0;
    return g;
  }
};

struct EncodeInputs {
  const WorldState* obs_world = nullptr;
  const CostMap* source_map = nullptr;        // the selected path's cost map
  const Path* selected_path = nullptr;
  const PredictedOccupancy* prediction = nullptr;
  const std::deque<Vec2>* car_history = nullptr;  // recent car positions, oldest first
  double prev_reward = 0.0;
  double speed = 0.0;
  SpeedAction prev_action = SpeedAction::Maintain;
};

Observation encode_observation(const EncodeInputs& in, const SacParams& sp,
                               const WorldParams& wp, const CostmapParams& cp);

struct Transition {
  std::shared_ptr<const Observation> o;
  SpeedAction a = SpeedAction::Maintain;
  double r = 0.0;  // R_{t+1}
  std::shared_ptr<const Observation> o1;
  bool done = false;
};

// FIFO ring with uniform without-replacement batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity) : capacity_(capacity) {}

  void push(Transition t);
  int size() const { return static_cast<int>(data_.size()); }
  int capacity() const { return capacity_; }
  const Transition& at(int i) const { return data_[(head_ + i) % data_.size()]; }
  std::vector<const Transition*> sample(int batch, Rng& rng) const;

 private:
  int capacity_;
  size_t head_ = 0;  // index of the oldest transition once full
  std::vector<Transition> data_;
};

struct Losses {
  double j_v = 0.0;
  double j_q = 0.0;
  double j_pi = 0.0;
};

// Batch losses per the exact-expectation discrete formulation:
//   J_V  = mean 1/2 (V(o) - sum_a pi(a|o) (Q(o,a) - alpha log pi(a|o)))^2
//   J_Q  = mean 1/2 (Q(o,a) - (r + gamma (1-done) V_target(o')))^2
//   J_pi = mean sum_a pi(a|o) (alpha log pi(a|o) - Q(o,a))
// Each loss is differentiated as written (no stop-gradients on the live
// parameters); the target network is a separate constant parameter set.
// When grad_* is non-null it receives that loss's full gradient.
Losses compute_losses(const std::vector<const Transition*>& batch, const NetParams& live,
                      const NetParams& target, const NetConfig& cfg, const SacParams& sp,
                      NetGrads* grad_v, NetGrads* grad_q, NetGrads* grad_pi);

struct SacState {
  NetConfig cfg;
  NetParams live;
  NetParams target;
  AdamState adam_v, adam_q, adam_pi, adam_enc;
};

SacState make_sac_state(const SacParams& sp, uint64_t seed);

// One training step: gradient step per loss on its own parameter set
// (J_V -> V head, J_Q -> Q head, J_pi -> policy head; the shared encoder
// accumulates all three), then a Polyak update of the target network.
// Deterministic for any thread count: per-sample gradients reduce in sample
// order. Throws TrainingError on non-finite losses.
Losses sac_update(SacState& st, const std::vector<const Transition*>& batch,
                  const SacParams& sp, int threads);

enum class ActMode { Train, Test };

struct ActResult {
  SpeedAction action = SpeedAction::Maintain;
  std::array<double, kNumSpeedActions> distribution{};  // sampling distribution used
};

// Train: sample from (1-beta) softmax(planner values / t_plan) + beta pi.
// Test: argmax of the policy logits; no planner, no sampling.
ActResult act(const Observation& o, const SacState& st, const SacParams& sp,
              const std::array<double, kNumSpeedActions>* planner_values, double beta,
              ActMode mode, Rng& rng);

std::array<double, kNumSpeedActions> softmax(const std::array<double, kNumSpeedActions>& x,
                                             double temperature);

}  // namespace hylear

#endif  // HYLEAR_SAC_HPP_
