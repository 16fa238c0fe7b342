#include "pragnav/pipeline/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pragnav/common/random.hpp"
#include "pragnav/nn/checkpoint.hpp"
#include "pragnav/pipeline/sequential.hpp"
#include "pragnav/search/follower_policy.hpp"
#include "pragnav/world/vocabulary.hpp"

namespace pragnav::pipeline {

ExperimentConfig::ExperimentConfig() {
  const auto v = static_cast<std::size_t>(world::Vocabulary::standard().size());
  follower.vocab_size = v;
  speaker.vocab_size = v;
  follower_train.adam.learning_rate = 6e-3;
  speaker_train.adam.learning_rate = 6e-3;
  follower_train.iterations = 1500;
  speaker_train.iterations = 1000;
}

std::uint64_t stage_seed(const ExperimentConfig& config, std::string_view stage) {
  return derive_seed(config.seed, stage);
}

follower::FollowerModel fresh_follower(const ExperimentConfig& config) {
  return {config.follower, follower::init_follower(config.follower, stage_seed(config, "follower.init"))};
}

speaker::SpeakerModel fresh_speaker(const ExperimentConfig& config) {
  return {config.speaker, speaker::init_speaker(config.speaker, stage_seed(config, "speaker.init"))};
}

speaker::SpeakerModel train_speaker_model(const world::Dataset& data, const ExperimentConfig& config,
                                          std::vector<speaker::SpeakerLogEntry>* log) {
  auto model = fresh_speaker(config);
  auto cfg = config.speaker_train;
  cfg.seed = stage_seed(config, "speaker.train");
  const auto train = data.split(world::Split::kTrain);
  const auto val = data.split(world::Split::kValSeen);
  auto entries = speaker::train_speaker(model, train, data.environments, cfg, &val);
  nn::round_to_storage_precision(model.params);
  if (log) *log = std::move(entries);
  return model;
}

double probe_success(const follower::FollowerModel& model, const std::vector<world::DatasetExample>& examples,
                     const std::vector<world::NavGraph>& environments, std::size_t limit, double threshold) {
  const std::size_t n = std::min(limit, examples.size());
  if (n == 0) return 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ex = examples[i];
    const auto& graph = environments.at(ex.environment_id);
    const auto route = search::follower_greedy(model, graph, ex.instruction, ex.route.start());
    hits += score_episode(graph, ex, route, threshold).success;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

namespace {

follower::ProbeFn make_probe(const world::Dataset& data, const ExperimentConfig& config,
                             const std::vector<world::DatasetExample>& probe_set) {
  if (config.probe_examples == 0) return {};
  return [&data, &config, &probe_set](const follower::FollowerModel& m) {
    return probe_success(m, probe_set, data.environments, config.probe_examples, config.threshold);
  };
}

}  // namespace

follower::FollowerModel train_baseline_follower(const world::Dataset& data, const ExperimentConfig& config,
                                                std::vector<follower::TrainLogEntry>* log) {
  auto model = fresh_follower(config);
  auto cfg = config.follower_train;
  cfg.seed = stage_seed(config, "follower.train");
  const auto probe_set = data.split(world::Split::kValSeen);
  auto entries = follower::train_follower(model, data.split(world::Split::kTrain), data.environments, cfg, nullptr,
                                          make_probe(data, config, probe_set));
  nn::round_to_storage_precision(model.params);
  if (log) *log = std::move(entries);
  return model;
}

std::vector<world::DatasetExample> synthesize(const world::Dataset& data, const speaker::SpeakerModel& speaker,
                                              const ExperimentConfig& config) {
  const auto train = data.split(world::Split::kTrain);
  // Paraphrases share a route; M scales with distinct routes.
  const std::size_t routes = train.size() / static_cast<std::size_t>(std::max(1, config.dataset.train_paraphrases));
  return augment_dataset(speaker, data.environments, data.environment_ids(world::Split::kTrain),
                         augmentation_size(config.augment_multiplier, routes), stage_seed(config, "augment"));
}

follower::FollowerModel train_augmented_follower(const world::Dataset& data,
                                                 const std::vector<world::DatasetExample>& synthetic,
                                                 const ExperimentConfig& config,
                                                 std::vector<follower::TrainLogEntry>* log, nn::ParamSet* phase1) {
  auto model = fresh_follower(config);
  auto cfg = config.follower_train;
  cfg.seed = stage_seed(config, "follower.train");
  const auto schedule = TwoPhaseSchedule::standard(cfg, config.follower_train.iterations);
  const auto probe_set = data.split(world::Split::kValSeen);
  auto result = two_phase_train(model, data.split(world::Split::kTrain), synthetic, data.environments, schedule,
                                make_probe(data, config, probe_set));
  nn::round_to_storage_precision(model.params);
  if (phase1) {
    *phase1 = std::move(result.phase1_params);
    nn::round_to_storage_precision(*phase1);
  }
  if (log) *log = std::move(result.log);
  return model;
}

std::vector<PragmaticEpisode> run_pragmatic_episodes(const follower::FollowerModel& follower,
                                                     const speaker::SpeakerModel& speaker,
                                                     const std::vector<world::DatasetExample>& examples,
                                                     const std::vector<world::NavGraph>& environments,
                                                     const search::PragmaticConfig& config, int workers) {
  std::vector<PragmaticEpisode> out(examples.size());
  auto run = [&](std::size_t i) {
    const auto& ex = examples[i];
    const auto& graph = environments.at(ex.environment_id);
    search::FollowerPolicy policy(follower, graph, ex.instruction);
    PragmaticEpisode ep;
    ep.greedy = search::greedy_follow(policy, graph, ex.route.start(), config.max_actions);
    auto result = search::state_factored_search(policy, graph, ex.route.start(), config.search());
    ep.candidates = search::score_candidates(result.completed, speaker, ex.instruction, graph, config.lambda);
    ep.trace = std::move(result.expansion_trace);
    for (std::size_t t = 0; t < ep.trace.size(); ++t) {
      if (ep.trace[t].last().completed) ep.trace_ends.push_back(t + 1);
    }
    out[i] = std::move(ep);
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < examples.size(); ++i) run(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < examples.size() && !failed; i = next++) {
        try {
          run(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

const search::ScoredRoute& choose(const PragmaticEpisode& episode, std::size_t k, double lambda) {
  if (episode.candidates.empty()) throw std::invalid_argument("choose: no candidates");
  const std::size_t n = std::min(std::max<std::size_t>(k, 1), episode.candidates.size());
  std::vector<search::ScoredRoute> head(episode.candidates.begin(), episode.candidates.begin() + n);
  search::reweight(head, lambda);
  return episode.candidates[search::best_index(head)];
}

EvalReport greedy_report(const std::vector<PragmaticEpisode>& episodes,
                         const std::vector<world::DatasetExample>& examples,
                         const std::vector<world::NavGraph>& environments, double threshold) {
  std::vector<EpisodeRecord> recs;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    recs.push_back(score_episode(environments.at(examples[i].environment_id), examples[i], episodes[i].greedy,
                                 threshold));
  }
  return summarize(std::move(recs), threshold);
}

EvalReport pragmatic_report(const std::vector<PragmaticEpisode>& episodes,
                            const std::vector<world::DatasetExample>& examples,
                            const std::vector<world::NavGraph>& environments, std::size_t k, double lambda,
                            double threshold) {
  std::vector<EpisodeRecord> recs;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& pick = choose(episodes[i], k, lambda);
    recs.push_back(score_episode(environments.at(examples[i].environment_id), examples[i], pick.route, threshold));
  }
  return summarize(std::move(recs), threshold);
}

EvalReport sequential_report(const std::vector<PragmaticEpisode>& episodes,
                             const std::vector<world::DatasetExample>& examples,
                             const std::vector<world::NavGraph>& environments, std::size_t k, double lambda,
                             double threshold) {
  std::vector<EpisodeRecord> recs;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ep = episodes[i];
    const auto& graph = environments.at(examples[i].environment_id);
    const auto& pick = choose(ep, k, lambda);
    const std::size_t used = std::min(std::max<std::size_t>(k, 1), ep.trace_ends.size());
    const std::size_t len = used == 0 ? ep.trace.size() : ep.trace_ends[used - 1];
    const std::vector<world::Route> trace(ep.trace.begin(), ep.trace.begin() + static_cast<std::ptrdiff_t>(len));
    recs.push_back(score_episode(graph, examples[i], sequential_challenge_trajectory(trace, pick.route, graph),
                                 threshold));
  }
  return summarize(std::move(recs), threshold);
}

AblationResult run_ablation_grid(const world::Dataset& data, const TrainedModels& models,
                                 const ExperimentConfig& config) {
  AblationResult out;
  const auto seen = data.split(world::Split::kValSeen);
  const auto unseen = data.split(world::Split::kValUnseen);
  const auto& envs = data.environments;
  auto pc = config.pragmatic;
  pc.k = std::max(pc.k, config.ks.empty() ? pc.k : *std::max_element(config.ks.begin(), config.ks.end()));
  const double t = config.threshold;

  const auto base_seen = run_pragmatic_episodes(models.baseline, models.speaker, seen, envs, pc, config.eval_workers);
  const auto base_unseen =
      run_pragmatic_episodes(models.baseline, models.speaker, unseen, envs, pc, config.eval_workers);
  const auto aug_seen = run_pragmatic_episodes(models.augmented, models.speaker, seen, envs, pc, config.eval_workers);
  const auto aug_unseen =
      run_pragmatic_episodes(models.augmented, models.speaker, unseen, envs, pc, config.eval_workers);

  const std::size_t k = config.pragmatic.k;
  const double lambda = config.pragmatic.lambda;
  out.rows.push_back({"baseline (greedy)", greedy_report(base_seen, seen, envs, t),
                      greedy_report(base_unseen, unseen, envs, t)});
  out.rows.push_back({"+ augmentation", greedy_report(aug_seen, seen, envs, t),
                      greedy_report(aug_unseen, unseen, envs, t)});
  out.rows.push_back({"+ pragmatics", pragmatic_report(base_seen, seen, envs, k, lambda, t),
                      pragmatic_report(base_unseen, unseen, envs, k, lambda, t)});
  out.rows.push_back({"+ both", pragmatic_report(aug_seen, seen, envs, k, lambda, t),
                      pragmatic_report(aug_unseen, unseen, envs, k, lambda, t)});

  for (const auto& [name, eps, exs] : {std::tuple{"val_seen", &aug_seen, &seen},
                                       std::tuple{"val_unseen", &aug_unseen, &unseen}}) {
    for (double l : config.lambdas) out.lambda_sweep.push_back({k, l, name, pragmatic_report(*eps, *exs, envs, k, l, t)});
    for (std::size_t kk : config.ks) {
      out.k_sweep.push_back({kk, lambda, name, pragmatic_report(*eps, *exs, envs, kk, lambda, t)});
    }
  }
  out.sequential = {"+ both (sequential walk)", sequential_report(aug_seen, seen, envs, k, lambda, t),
                    sequential_report(aug_unseen, unseen, envs, k, lambda, t)};
  return out;
}

namespace {

nlohmann::json point_json(const SweepPoint& p) {
  auto j = to_json(p.report);
  j["K"] = p.k;
  j["lambda"] = p.lambda;
  j["split"] = p.split;
  return j;
}

nlohmann::json row_json(const GridRow& r) {
  return {{"name", r.name}, {"val_seen", to_json(r.val_seen)}, {"val_unseen", to_json(r.val_unseen)}};
}

std::string fmt(const char* f, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const AblationResult& result) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) j["rows"].push_back(row_json(r));
  j["sequential"] = row_json(result.sequential);
  j["lambda_sweep"] = nlohmann::json::array();
  for (const auto& p : result.lambda_sweep) j["lambda_sweep"].push_back(point_json(p));
  j["k_sweep"] = nlohmann::json::array();
  for (const auto& p : result.k_sweep) j["k_sweep"].push_back(point_json(p));
  return j;
}

std::string format_table(const AblationResult& result) {
  std::ostringstream os;
  auto cells = [&](const EvalReport& r) {
    os << fmt("%7.2f", r.navigation_error) << fmt("%7.1f", 100 * r.success_rate)
       << fmt("%7.1f", 100 * r.oracle_success_rate) << fmt("%9.2f", r.trajectory_length);
  };
  os << "system                        |        val_seen                |        val_unseen\n";
  os << "                              |     NE     SR    OSR       TL |     NE     SR    OSR       TL\n";
  auto line = [&](const GridRow& r) {
    std::string name = r.name;
    name.resize(30, ' ');
    os << name << "|";
    cells(r.val_seen);
    os << " |";
    cells(r.val_unseen);
    os << "\n";
  };
  for (const auto& r : result.rows) line(r);
  line(result.sequential);

  auto sweep = [&](const char* title, const std::vector<SweepPoint>& pts) {
    os << "\n" << title << "\n      K  lambda  split          NE     SR    OSR\n";
    for (const auto& p : pts) {
      std::string split = p.split;
      split.resize(12, ' ');
      os << fmt("%7.0f", static_cast<double>(p.k)) << fmt("%8.2f", p.lambda) << "  " << split
         << fmt("%7.2f", p.report.navigation_error) << fmt("%7.1f", 100 * p.report.success_rate)
         << fmt("%7.1f", 100 * p.report.oracle_success_rate) << "\n";
    }
  };
  sweep("lambda sweep", result.lambda_sweep);
  sweep("K sweep", result.k_sweep);
  return os.str();
}

}  // namespace pragnav::pipeline
