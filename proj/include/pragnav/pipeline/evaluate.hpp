#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pragnav/world/dataset.hpp"

namespace pragnav::pipeline {

inline constexpr double kSuccessThreshold = 3.0;

struct EpisodeRecord {
  int environment_id = 0;
  world::Route trajectory;
  double navigation_error = 0;
  double oracle_error = 0;  // closest visited point to the goal
  double trajectory_length = 0;
  bool success = false;
  bool oracle_success = false;
  std::string error;  // non-empty when the agent output was invalid
};

struct EvalReport {
  double navigation_error = 0;
  double success_rate = 0;
  double oracle_success_rate = 0;
  double trajectory_length = 0;
  double threshold = kSuccessThreshold;
  std::vector<EpisodeRecord> episodes;
};

// Produces the executed trajectory for one example.
using Agent = std::function<world::Route(const world::DatasetExample&, const world::NavGraph&)>;

// Metrics for one executed trajectory. An invalid trajectory (broken edges,
// wrong start) fails: NE is the start-to-goal distance, OSR looks at the
// start only, TL is 0.
EpisodeRecord score_episode(const world::NavGraph& graph, const world::DatasetExample& example,
                            const world::Route& trajectory, double threshold = kSuccessThreshold);

EvalReport summarize(std::vector<EpisodeRecord> episodes, double threshold = kSuccessThreshold);

// Runs `agent` on every example. `workers` > 1 evaluates episodes on that
// many threads; the report does not depend on it.
EvalReport evaluate(const Agent& agent, const std::vector<world::DatasetExample>& examples,
                    const std::vector<world::NavGraph>& environments, double threshold = kSuccessThreshold,
                    int workers = 1);

nlohmann::json to_json(const EvalReport& report, bool with_episodes = false);

}  // namespace pragnav::pipeline
