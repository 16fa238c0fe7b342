#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pragnav/common/random.hpp"
#include "pragnav/follower/follower.hpp"
#include "pragnav/nn/adam.hpp"
#include "pragnav/world/dataset.hpp"

namespace pragnav::follower {

// Student forcing samples the executed action from the model and supervises
// every visited state with the next step of a shortest path to the goal.
// Teacher forcing walks the reference route and supervises its actions.
enum class Forcing { kStudent, kTeacher };

struct FollowerTrainConfig {
  int iterations = 1500;
  int batch_size = 16;
  nn::AdamConfig adam;
  double clip_norm = 5.0;
  int max_actions = 20;
  Forcing forcing = Forcing::kStudent;
  int log_every = 100;
  std::uint64_t seed = 0;
};

struct TrainLogEntry {
  int iteration = 0;
  double loss = 0;
  double grad_norm = 0;
  std::optional<double> probe_success;
  double seconds = 0;
};

// First action of a hop-shortest path from `node` toward the node whose hop
// distances are `dist_to_goal`: Stop at the goal, otherwise the lowest-id
// neighbor one hop closer.
world::Action shortest_path_action(const world::NavGraph& graph, const std::vector<int>& dist_to_goal,
                                   world::NodeId node);

// Mean per-step negative log-likelihood of one rollout. `rng` drives the
// sampled actions under student forcing.
nn::Var episode_loss(nn::Tape& tape, const FollowerConfig& config, const world::NavGraph& graph,
                     const world::DatasetExample& example, Forcing forcing, int max_actions, Rng& rng);

using ProbeFn = std::function<double(const FollowerModel&)>;
using LogFn = std::function<void(const TrainLogEntry&)>;

// Minibatch Adam with global-norm clipping. `optimizer`, when given, carries
// moment estimates across calls. `probe` is evaluated at every log point.
std::vector<TrainLogEntry> train_follower(FollowerModel& model, const std::vector<world::DatasetExample>& examples,
                                          const std::vector<world::NavGraph>& environments,
                                          const FollowerTrainConfig& config, nn::OptimizerState* optimizer = nullptr,
                                          const ProbeFn& probe = {}, const LogFn& on_log = {});

}  // namespace pragnav::follower
