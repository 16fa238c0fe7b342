#include "pragnav/speaker/speaker.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pragnav/common/random.hpp"
#include "pragnav/nn/ops.hpp"
#include "pragnav/world/vocabulary.hpp"

namespace pragnav::speaker {

using nn::Tape;
using nn::Tensor;
using nn::Real;
using nn::Var;

nlohmann::json SpeakerConfig::to_json() const {
  return {{"vocab_size", vocab_size}, {"embedding", embedding}, {"hidden", hidden}};
}

SpeakerConfig SpeakerConfig::from_json(const nlohmann::json& j) {
  SpeakerConfig c;
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.embedding = j.at("embedding").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  return c;
}

nn::ParamSet speaker_layout(const SpeakerConfig& config) {
  if (config.vocab_size == 0) throw std::invalid_argument("speaker config: vocab_size is 0");
  nn::ParamSet p;
  p.add("embedding", Tensor({config.vocab_size, config.embedding}));
  nn::add_lstm_params(p, config.encoder());
  nn::add_lstm_params(p, config.decoder());
  p.add("output.w", Tensor({config.vocab_size, 2 * config.hidden}));
  p.add("output.b", Tensor({config.vocab_size}));
  return p;
}

nn::ParamSet init_speaker(const SpeakerConfig& config, std::uint64_t seed) {
  auto p = speaker_layout(config);
  nn::init_uniform(p, seed, 0.1);
  nn::set_forget_bias(p, config.encoder(), 1.0);
  nn::set_forget_bias(p, config.decoder(), 1.0);
  return p;
}

Tensor route_features(const world::NavGraph& graph, const world::Route& route) {
  if (auto err = world::route_error(graph, route)) throw std::invalid_argument("route_features: " + *err);
  const std::size_t f = follower::feature_width();
  Tensor out({route.actions.size(), 2 * f});
  for (std::size_t t = 0; t < route.actions.size(); ++t) {
    const auto obs = follower::observe(graph, route.states[t]);
    Real* row = out.data() + t * 2 * f;
    for (std::size_t v = 0; v < obs.views.rows(); ++v) {
      for (std::size_t k = 0; k < f; ++k) row[k] += obs.views.at(v, k);
    }
    for (std::size_t k = 0; k < f; ++k) row[k] /= static_cast<Real>(obs.views.rows());
    const auto slot = obs.slot_of(route.actions[t]);
    for (std::size_t k = 0; k < f; ++k) row[f + k] = obs.actions.at(*slot, k);
  }
  return out;
}

EncodedRoute encode_route(Tape& tape, const SpeakerConfig& config, const Tensor& features) {
  const auto spec = config.encoder();
  Var x = tape.constant(features);
  auto state = nn::lstm_zero_state(tape, spec);
  std::vector<Var> hs;
  for (std::size_t t = 0; t < features.rows(); ++t) {
    state = nn::lstm_step(tape, spec, nn::row(x, t), state);
    hs.push_back(state.h);
  }
  return {nn::stack_rows(hs), state};
}

Var next_token_logits(Tape& tape, const SpeakerConfig& config, const EncodedRoute& encoded, nn::LstmState& state,
                      int prev_token) {
  Var x = nn::row(tape.param("embedding"), static_cast<std::size_t>(prev_token));
  state = nn::lstm_step(tape, config.decoder(), x, state);
  Var weights = nn::softmax(nn::matvec(encoded.states, state.h));
  Var context = nn::matvec_t(encoded.states, weights);
  return nn::add(nn::matvec(tape.param("output.w"), nn::concat({state.h, context})), tape.param("output.b"));
}

std::vector<int> scored_tokens(const world::Instruction& instruction, std::size_t vocab_size) {
  std::vector<int> out;
  for (int tok : instruction.tokens) {
    if (tok < 0 || static_cast<std::size_t>(tok) >= vocab_size) {
      throw std::invalid_argument("token id " + std::to_string(tok) + " outside vocabulary");
    }
    out.push_back(tok);
    if (tok == world::kEos) return out;
  }
  throw std::invalid_argument("instruction is not EOS-terminated");
}

namespace {

std::vector<Var> token_log_probs(Tape& tape, const SpeakerConfig& config, const Tensor& features,
                                 const std::vector<int>& tokens) {
  const auto encoded = encode_route(tape, config, features);
  auto state = encoded.final;
  int prev = world::kBos;
  std::vector<Var> out;
  for (int tok : tokens) {
    Var logits = next_token_logits(tape, config, encoded, state, prev);
    out.push_back(nn::pick(nn::log_softmax(logits), static_cast<std::size_t>(tok)));
    prev = tok;
  }
  return out;
}

}  // namespace

Var instruction_nll(Tape& tape, const SpeakerConfig& config, const Tensor& features,
                    const world::Instruction& instruction) {
  const auto tokens = scored_tokens(instruction, config.vocab_size);
  return nn::scale(nn::sum(nn::concat(token_log_probs(tape, config, features, tokens))), -1.0);
}

double speaker_logprob(const SpeakerModel& model, const world::NavGraph& graph,
                       const world::Instruction& instruction, const world::Route& route) {
  const auto tokens = scored_tokens(instruction, model.config.vocab_size);
  const auto features = route_features(graph, route);
  Tape tape(model.params);
  double total = 0;
  for (Var lp : token_log_probs(tape, model.config, features, tokens)) total += lp.item();
  return total;
}

std::vector<double> speaker_step_logprobs(const SpeakerModel& model, const world::NavGraph& graph,
                                          const world::Instruction& instruction, const world::Route& route) {
  const auto tokens = scored_tokens(instruction, model.config.vocab_size);
  const auto features = route_features(graph, route);
  Tape tape(model.params);
  std::vector<double> out;
  for (Var lp : token_log_probs(tape, model.config, features, tokens)) out.push_back(lp.item());
  return out;
}

world::Instruction speaker_generate(const SpeakerModel& model, const world::NavGraph& graph,
                                    const world::Route& route) {
  const auto features = route_features(graph, route);
  Tape tape(model.params);
  const auto encoded = encode_route(tape, model.config, features);
  auto state = encoded.final;
  world::Instruction out;
  int prev = world::kBos;
  while (static_cast<int>(out.tokens.size()) < world::kMaxInstructionTokens - 1) {
    const auto logits = next_token_logits(tape, model.config, encoded, state, prev).values();
    int best = world::kEos;
    for (int id = world::kEos + 1; id < static_cast<int>(logits.size()); ++id) {
      if (logits[id] > logits[best]) best = id;
    }
    out.tokens.push_back(best);
    if (best == world::kEos) return out;
    prev = best;
  }
  out.tokens.push_back(world::kEos);
  return out;
}

double perplexity(const SpeakerModel& model, const std::vector<world::DatasetExample>& examples,
                  const std::vector<world::NavGraph>& environments) {
  double nll = 0;
  std::size_t count = 0;
  for (const auto& ex : examples) {
    const auto& graph = environments.at(ex.environment_id);
    nll -= speaker_logprob(model, graph, ex.instruction, ex.route);
    count += scored_tokens(ex.instruction, model.config.vocab_size).size();
  }
  if (count == 0) throw std::invalid_argument("perplexity: no tokens");
  return std::exp(nll / static_cast<double>(count));
}

std::vector<SpeakerLogEntry> train_speaker(SpeakerModel& model, const std::vector<world::DatasetExample>& examples,
                                           const std::vector<world::NavGraph>& environments,
                                           const SpeakerTrainConfig& config,
                                           const std::vector<world::DatasetExample>* validation,
                                           const std::function<void(const SpeakerLogEntry&)>& on_log) {
  if (examples.empty()) throw std::invalid_argument("train_speaker: no examples");
  if (config.batch_size <= 0) throw std::invalid_argument("train_speaker: bad batch size");
  auto opt = nn::OptimizerState::for_params(model.params, config.adam);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  std::uint64_t epoch = 0;

  std::vector<SpeakerLogEntry> log;
  const auto t0 = std::chrono::steady_clock::now();
  auto grads = model.params.zeros_like();
  double running = 0;
  int running_n = 0;

  for (int it = 1; it <= config.iterations; ++it) {
    grads.fill(0);
    double batch_loss = 0;
    for (int b = 0; b < config.batch_size; ++b) {
      if (cursor == order.size()) {
        Rng shuffler(derive_seed(derive_seed(config.seed, "order"), epoch++));
        shuffler.shuffle(order);
        cursor = 0;
      }
      const auto& ex = examples[order[cursor++]];
      const auto features = route_features(environments.at(ex.environment_id), ex.route);
      const auto tokens = scored_tokens(ex.instruction, model.config.vocab_size);
      Tape tape(model.params, &grads);
      Var loss = nn::scale(instruction_nll(tape, model.config, features, ex.instruction),
                           1.0 / static_cast<double>(tokens.size() * config.batch_size));
      batch_loss += loss.item();
      tape.backward(loss);
    }
    const double norm = nn::clip_global_norm(grads, config.clip_norm);
    if (!std::isfinite(norm)) throw std::runtime_error("non-finite gradient at iteration " + std::to_string(it));
    nn::adam_step(model.params, grads, opt);
    running += batch_loss;
    ++running_n;

    if (config.log_every > 0 && (it % config.log_every == 0 || it == config.iterations)) {
      SpeakerLogEntry e;
      e.iteration = it;
      e.loss = running / running_n;
      e.grad_norm = norm;
      if (validation && !validation->empty()) e.val_perplexity = perplexity(model, *validation, environments);
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log.push_back(e);
      if (on_log) on_log(e);
      running = 0;
      running_n = 0;
    }
  }
  return log;
}

}  // namespace pragnav::speaker
