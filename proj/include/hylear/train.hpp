#ifndef HYLEAR_TRAIN_HPP_
#define HYLEAR_TRAIN_HPP_

#include <string>

#include "hylear/config.hpp"

namespace hylear {

struct TrainResult {
  std::string checkpoint_path;
  int steps = 0;
  int episodes = 0;
};

// Interposed-learning loop: at each step the hybrid planner selects the path
// (steering) and the POMDP planner scores the speed actions; the executed
// speed action is sampled from the annealed planner/policy mixture. Replay
// transitions hold the true environment reward; soft actor-critic updates run
// off-policy from the buffer. Writes periodic checkpoints plus loss and
// episode CSV logs under out_dir.
TrainResult run_training(const Config& cfg, const std::string& out_dir);

}  // namespace hylear

#endif  // HYLEAR_TRAIN_HPP_
