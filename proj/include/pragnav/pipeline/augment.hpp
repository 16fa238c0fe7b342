#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pragnav/follower/training.hpp"
#include "pragnav/speaker/speaker.hpp"

namespace pragnav::pipeline {

// M shortest-path routes drawn from `environment_ids` (each pick: uniform
// environment, then a seeded qualifying endpoint pair), described by greedy
// speaker decoding. Duplicates of original routes are kept.
std::vector<world::DatasetExample> augment_dataset(const speaker::SpeakerModel& speaker,
                                                   const std::vector<world::NavGraph>& environments,
                                                   const std::vector<int>& environment_ids, std::size_t m,
                                                   std::uint64_t seed);

// Synthetic count for a multiplier of the original route count.
std::size_t augmentation_size(double multiplier, std::size_t original_routes);

struct TwoPhaseSchedule {
  follower::FollowerTrainConfig train;  // iterations field unused
  int augmented_iterations = 0;  // phase 1, on S and D together
  int finetune_iterations = 0;   // phase 2, on D alone

  // Phase 1 runs `augmented` iterations, phase 2 another 2/5 of that.
  static TwoPhaseSchedule standard(const follower::FollowerTrainConfig& train, int augmented);
};

struct TwoPhaseResult {
  std::vector<follower::TrainLogEntry> log;
  nn::ParamSet phase1_params;  // the phase-boundary snapshot
};

// With S empty this is plain training on D for the total iteration count.
TwoPhaseResult two_phase_train(follower::FollowerModel& model, const std::vector<world::DatasetExample>& original,
                               const std::vector<world::DatasetExample>& synthetic,
                               const std::vector<world::NavGraph>& environments, const TwoPhaseSchedule& schedule,
                               const follower::ProbeFn& probe = {}, const follower::LogFn& on_log = {});

}  // namespace pragnav::pipeline
