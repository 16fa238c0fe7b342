#include "pragnav/pipeline/augment.hpp"

#include <cmath>
#include <stdexcept>

#include "pragnav/common/random.hpp"
#include "pragnav/world/environment.hpp"

namespace pragnav::pipeline {

std::vector<world::DatasetExample> augment_dataset(const speaker::SpeakerModel& speaker,
                                                   const std::vector<world::NavGraph>& environments,
                                                   const std::vector<int>& environment_ids, std::size_t m,
                                                   std::uint64_t seed) {
  std::vector<world::DatasetExample> out;
  if (m == 0) return out;
  if (environment_ids.empty()) throw std::invalid_argument("augment_dataset: no environments to sample from");
  Rng rng(derive_seed(seed, "augment.environment"));
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int env = environment_ids[rng.below(environment_ids.size())];
    const auto& graph = environments.at(env);
    world::DatasetExample ex;
    ex.route = world::sample_route(graph, derive_seed(derive_seed(seed, "augment.route"), i));
    ex.instruction = speaker::speaker_generate(speaker, graph, ex.route);
    ex.environment_id = env;
    ex.split = world::Split::kTrain;
    ex.provenance = world::Provenance::kSpeakerSynthetic;
    out.push_back(std::move(ex));
  }
  return out;
}

std::size_t augmentation_size(double multiplier, std::size_t original_routes) {
  if (!(multiplier >= 0)) throw std::invalid_argument("augmentation multiplier must be non-negative");
  return static_cast<std::size_t>(std::llround(multiplier * static_cast<double>(original_routes)));
}

TwoPhaseSchedule TwoPhaseSchedule::standard(const follower::FollowerTrainConfig& train, int augmented) {
  TwoPhaseSchedule s;
  s.train = train;
  s.augmented_iterations = augmented;
  s.finetune_iterations = static_cast<int>(std::lround(augmented * 2.0 / 5.0));
  return s;
}

TwoPhaseResult two_phase_train(follower::FollowerModel& model, const std::vector<world::DatasetExample>& original,
                               const std::vector<world::DatasetExample>& synthetic,
                               const std::vector<world::NavGraph>& environments, const TwoPhaseSchedule& schedule,
                               const follower::ProbeFn& probe, const follower::LogFn& on_log) {
  if (schedule.augmented_iterations < 0 || schedule.finetune_iterations < 0 ||
      schedule.augmented_iterations + schedule.finetune_iterations == 0) {
    throw std::invalid_argument("two_phase_train: schedule must be positive");
  }
  TwoPhaseResult result;
  auto opt = nn::OptimizerState::for_params(model.params, schedule.train.adam);

  if (synthetic.empty()) {
    auto cfg = schedule.train;
    cfg.iterations = schedule.augmented_iterations + schedule.finetune_iterations;
    result.log = follower::train_follower(model, original, environments, cfg, &opt, probe, on_log);
    result.phase1_params = model.params;
    return result;
  }

  std::vector<world::DatasetExample> both = synthetic;
  both.insert(both.end(), original.begin(), original.end());

  auto phase1 = schedule.train;
  phase1.iterations = schedule.augmented_iterations;
  if (phase1.iterations > 0) {
    result.log = follower::train_follower(model, both, environments, phase1, &opt, probe, on_log);
  }
  result.phase1_params = model.params;

  auto phase2 = schedule.train;
  phase2.iterations = schedule.finetune_iterations;
  phase2.seed = derive_seed(schedule.train.seed, "finetune");
  if (phase2.iterations > 0) {
    auto log2 = follower::train_follower(model, original, environments, phase2, &opt, probe,
                                         [&](const follower::TrainLogEntry& e) {
                                           if (on_log) {
                                             auto shifted = e;
                                             shifted.iteration += schedule.augmented_iterations;
                                             on_log(shifted);
                                           }
                                         });
    for (auto& e : log2) {
      e.iteration += schedule.augmented_iterations;
      result.log.push_back(e);
    }
  }
  return result;
}

}  // namespace pragnav::pipeline
