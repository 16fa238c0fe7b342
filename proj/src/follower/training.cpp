#include "pragnav/follower/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pragnav/nn/ops.hpp"

namespace pragnav::follower {

using world::Action;

Action shortest_path_action(const world::NavGraph& graph, const std::vector<int>& dist_to_goal,
                            world::NodeId node) {
  const int d = dist_to_goal.at(node);
  if (d == 0) return Action::stop();
  if (d < 0) throw std::invalid_argument("goal unreachable from node " + std::to_string(node));
  for (auto n : graph.neighbors(node)) {
    if (dist_to_goal[n] == d - 1) return Action::move(n);
  }
  throw std::logic_error("inconsistent hop distances");
}

nn::Var episode_loss(nn::Tape& tape, const FollowerConfig& config, const world::NavGraph& graph,
                     const world::DatasetExample& example, Forcing forcing, int max_actions, Rng& rng) {
  const auto& route = example.route;
  const auto encoded = encode_instruction(tape, config, example.instruction);
  auto memory = initial_decoder_state(tape, encoded);
  const auto dist = graph.hop_distances(example.goal());
  auto agent = route.start();
  std::vector<nn::Var> terms;

  for (int t = 0; t < max_actions; ++t) {
    const auto obs = observe(graph, agent);
    const auto step = follower_step(tape, config, encoded, memory, obs);

    Action target;
    if (forcing == Forcing::kTeacher) {
      if (static_cast<std::size_t>(t) >= route.actions.size()) break;
      target = route.actions[t];
    } else {
      target = shortest_path_action(graph, dist, agent.node);
    }
    const auto target_slot = obs.slot_of(target);
    if (!target_slot) throw std::invalid_argument("reference action not offered by the observation");
    terms.push_back(nn::pick(step.log_probs, *target_slot));

    std::size_t taken = *target_slot;
    if (forcing == Forcing::kStudent) {
      std::vector<double> probs;
      for (double lp : step.log_probs.values()) probs.push_back(std::exp(lp));
      taken = rng.categorical(probs);
    }
    if (t == max_actions - 1) taken = 0;
    const Action action = obs.action(taken);
    if (action.is_stop()) break;
    memory = advance(tape, step, obs, taken);
    agent = world::transition(graph, agent, action);
  }
  return nn::scale(nn::sum(nn::concat(terms)), -1.0 / static_cast<double>(terms.size()));
}

std::vector<TrainLogEntry> train_follower(FollowerModel& model, const std::vector<world::DatasetExample>& examples,
                                          const std::vector<world::NavGraph>& environments,
                                          const FollowerTrainConfig& config, nn::OptimizerState* optimizer,
                                          const ProbeFn& probe, const LogFn& on_log) {
  if (examples.empty()) throw std::invalid_argument("train_follower: no examples");
  if (config.batch_size <= 0 || config.max_actions <= 0) throw std::invalid_argument("train_follower: bad config");
  nn::OptimizerState local = nn::OptimizerState::for_params(model.params, config.adam);
  nn::OptimizerState& opt = optimizer ? *optimizer : local;

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  int epoch = 0;

  std::vector<TrainLogEntry> log;
  const auto t0 = std::chrono::steady_clock::now();
  auto grads = model.params.zeros_like();
  double running = 0;
  int running_n = 0;

  for (int it = 1; it <= config.iterations; ++it) {
    grads.fill(0);
    double batch_loss = 0;
    for (int b = 0; b < config.batch_size; ++b) {
      if (cursor == order.size()) {
        Rng shuffler(derive_seed(derive_seed(config.seed, "order"), static_cast<std::uint64_t>(epoch++)));
        shuffler.shuffle(order);
        cursor = 0;
      }
      const auto& ex = examples[order[cursor++]];
      Rng rng(derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(it)), static_cast<std::uint64_t>(b)));
      nn::Tape tape(model.params, &grads);
      auto loss = episode_loss(tape, model.config, environments.at(ex.environment_id), ex, config.forcing,
                               config.max_actions, rng);
      loss = nn::scale(loss, 1.0 / config.batch_size);
      batch_loss += loss.item();
      tape.backward(loss);
    }
    const double norm = nn::clip_global_norm(grads, config.clip_norm);
    if (!std::isfinite(norm)) throw std::runtime_error("non-finite gradient at iteration " + std::to_string(it));
    nn::adam_step(model.params, grads, opt);
    running += batch_loss;
    ++running_n;

    if (config.log_every > 0 && (it % config.log_every == 0 || it == config.iterations)) {
      TrainLogEntry e;
      e.iteration = it;
      e.loss = running / running_n;
      e.grad_norm = norm;
      if (probe) e.probe_success = probe(model);
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log.push_back(e);
      if (on_log) on_log(e);
      running = 0;
      running_n = 0;
    }
  }
  return log;
}

}  // namespace pragnav::follower
