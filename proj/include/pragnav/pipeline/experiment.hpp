#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pragnav/pipeline/augment.hpp"
#include "pragnav/pipeline/evaluate.hpp"
#include "pragnav/search/pragmatic.hpp"

namespace pragnav::pipeline {

struct ExperimentConfig {
  world::DatasetConfig dataset;
  std::uint64_t seed = 1;
  follower::FollowerConfig follower;  // vocab_size filled from the vocabulary
  speaker::SpeakerConfig speaker;
  follower::FollowerTrainConfig follower_train;
  speaker::SpeakerTrainConfig speaker_train;
  double augment_multiplier = 25.0;
  search::PragmaticConfig pragmatic;
  std::vector<double> lambdas{0.0, 0.5, 0.9, 0.95, 1.0};
  std::vector<std::size_t> ks{1, 2, 5, 10, 20, 40};
  double threshold = kSuccessThreshold;
  int eval_workers = 1;
  std::size_t probe_examples = 0;  // val_seen probe size for training logs; 0 disables

  ExperimentConfig();
};

// Named seeds derived from the experiment seed.
std::uint64_t stage_seed(const ExperimentConfig& config, std::string_view stage);

follower::FollowerModel fresh_follower(const ExperimentConfig& config);
speaker::SpeakerModel fresh_speaker(const ExperimentConfig& config);

speaker::SpeakerModel train_speaker_model(const world::Dataset& data, const ExperimentConfig& config,
                                          std::vector<speaker::SpeakerLogEntry>* log = nullptr);

follower::FollowerModel train_baseline_follower(const world::Dataset& data, const ExperimentConfig& config,
                                                std::vector<follower::TrainLogEntry>* log = nullptr);

std::vector<world::DatasetExample> synthesize(const world::Dataset& data, const speaker::SpeakerModel& speaker,
                                              const ExperimentConfig& config);

follower::FollowerModel train_augmented_follower(const world::Dataset& data,
                                                 const std::vector<world::DatasetExample>& synthetic,
                                                 const ExperimentConfig& config,
                                                 std::vector<follower::TrainLogEntry>* log = nullptr,
                                                 nn::ParamSet* phase1 = nullptr);

// Greedy success on the first `limit` examples, for training logs.
double probe_success(const follower::FollowerModel& model, const std::vector<world::DatasetExample>& examples,
                     const std::vector<world::NavGraph>& environments, std::size_t limit, double threshold);

// Everything pragmatic evaluation needs for one example, computed once: the
// greedy route, the speaker-scored search candidates in selection order and
// the search trace.
struct PragmaticEpisode {
  world::Route greedy;
  std::vector<search::ScoredRoute> candidates;
  std::vector<world::Route> trace;
  std::vector<std::size_t> trace_ends;  // trace length when candidate i was selected
};

std::vector<PragmaticEpisode> run_pragmatic_episodes(const follower::FollowerModel& follower,
                                                     const speaker::SpeakerModel& speaker,
                                                     const std::vector<world::DatasetExample>& examples,
                                                     const std::vector<world::NavGraph>& environments,
                                                     const search::PragmaticConfig& config, int workers = 1);

// Route chosen from the first `k` candidates under speaker weight `lambda`.
const search::ScoredRoute& choose(const PragmaticEpisode& episode, std::size_t k, double lambda);

EvalReport greedy_report(const std::vector<PragmaticEpisode>& episodes,
                         const std::vector<world::DatasetExample>& examples,
                         const std::vector<world::NavGraph>& environments, double threshold);
EvalReport pragmatic_report(const std::vector<PragmaticEpisode>& episodes,
                            const std::vector<world::DatasetExample>& examples,
                            const std::vector<world::NavGraph>& environments, std::size_t k, double lambda,
                            double threshold);
EvalReport sequential_report(const std::vector<PragmaticEpisode>& episodes,
                             const std::vector<world::DatasetExample>& examples,
                             const std::vector<world::NavGraph>& environments, std::size_t k, double lambda,
                             double threshold);

struct GridRow {
  std::string name;
  EvalReport val_seen;
  EvalReport val_unseen;
};

struct SweepPoint {
  std::size_t k = 0;
  double lambda = 0;
  std::string split;
  EvalReport report;
};

struct AblationResult {
  std::vector<GridRow> rows;
  std::vector<SweepPoint> lambda_sweep;
  std::vector<SweepPoint> k_sweep;
  GridRow sequential;
};

struct TrainedModels {
  speaker::SpeakerModel speaker;
  follower::FollowerModel baseline;
  follower::FollowerModel augmented;
};

// Rows: baseline greedy, +augmentation, +pragmatics, +both, on val_seen and
// val_unseen. Sweeps and the sequential trajectory use the +both system.
AblationResult run_ablation_grid(const world::Dataset& data, const TrainedModels& models,
                                 const ExperimentConfig& config);

nlohmann::json to_json(const AblationResult& result);
std::string format_table(const AblationResult& result);

}  // namespace pragnav::pipeline
