#include "pragnav/pipeline/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

#include "pragnav/world/serialization.hpp"

namespace pragnav::pipeline {

EpisodeRecord score_episode(const world::NavGraph& graph, const world::DatasetExample& example,
                            const world::Route& trajectory, double threshold) {
  EpisodeRecord rec;
  rec.environment_id = example.environment_id;
  rec.trajectory = trajectory;
  const auto goal = graph.position(example.goal());
  const auto start = example.route.start();

  if (auto err = world::route_error(graph, trajectory)) {
    rec.error = *err;
  } else if (trajectory.start().node != start.node) {
    rec.error = "trajectory does not begin at the episode start";
  }
  if (!rec.error.empty()) {
    rec.navigation_error = world::distance(graph.position(start.node), goal);
    rec.oracle_error = rec.navigation_error;
    rec.success = false;
    rec.oracle_success = rec.oracle_error < threshold;
    return rec;
  }

  rec.navigation_error = world::distance(graph.position(trajectory.last().node), goal);
  rec.oracle_error = rec.navigation_error;
  for (const auto& s : trajectory.states) {
    rec.oracle_error = std::min(rec.oracle_error, world::distance(graph.position(s.node), goal));
  }
  rec.trajectory_length = world::path_length(graph, trajectory);
  rec.success = rec.navigation_error < threshold;
  rec.oracle_success = rec.oracle_error < threshold;
  return rec;
}

EvalReport summarize(std::vector<EpisodeRecord> episodes, double threshold) {
  EvalReport r;
  r.threshold = threshold;
  r.episodes = std::move(episodes);
  if (r.episodes.empty()) return r;
  for (const auto& e : r.episodes) {
    r.navigation_error += e.navigation_error;
    r.success_rate += e.success;
    r.oracle_success_rate += e.oracle_success;
    r.trajectory_length += e.trajectory_length;
  }
  const double n = static_cast<double>(r.episodes.size());
  r.navigation_error /= n;
  r.success_rate /= n;
  r.oracle_success_rate /= n;
  r.trajectory_length /= n;
  return r;
}

EvalReport evaluate(const Agent& agent, const std::vector<world::DatasetExample>& examples,
                    const std::vector<world::NavGraph>& environments, double threshold, int workers) {
  if (!(threshold > 0)) throw std::invalid_argument("evaluate: threshold must be positive");
  std::vector<EpisodeRecord> records(examples.size());
  auto run = [&](std::size_t i) {
    const auto& ex = examples[i];
    const auto& graph = environments.at(ex.environment_id);
    world::Route trajectory;
    try {
      trajectory = agent(ex, graph);
    } catch (const std::invalid_argument& e) {
      EpisodeRecord rec = score_episode(graph, ex, world::Route{}, threshold);
      rec.error = e.what();
      records[i] = std::move(rec);
      return;
    }
    records[i] = score_episode(graph, ex, trajectory, threshold);
  };

  const std::size_t n_workers = std::max(1, workers);
  if (n_workers == 1 || examples.size() < 2) {
    for (std::size_t i = 0; i < examples.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
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
  }
  return summarize(std::move(records), threshold);
}

nlohmann::json to_json(const EvalReport& report, bool with_episodes) {
  nlohmann::json j = {{"NE", report.navigation_error},
                      {"SR", report.success_rate},
                      {"OSR", report.oracle_success_rate},
                      {"TL", report.trajectory_length},
                      {"threshold", report.threshold},
                      {"episodes", report.episodes.size()}};
  if (with_episodes) {
    auto arr = nlohmann::json::array();
    for (const auto& e : report.episodes) {
      nlohmann::json rec = {{"environment_id", e.environment_id},
                            {"NE", e.navigation_error},
                            {"oracle_error", e.oracle_error},
                            {"TL", e.trajectory_length},
                            {"success", e.success},
                            {"oracle_success", e.oracle_success},
                            {"trajectory", world::route_to_json(e.trajectory)}};
      if (!e.error.empty()) rec["error"] = e.error;
      arr.push_back(std::move(rec));
    }
    j["records"] = std::move(arr);
  }
  return j;
}

}  // namespace pragnav::pipeline
