#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "pragnav/follower/observation.hpp"
#include "pragnav/nn/adam.hpp"
#include "pragnav/nn/lstm.hpp"
#include "pragnav/world/dataset.hpp"

namespace pragnav::speaker {

struct SpeakerConfig {
  std::size_t vocab_size = 0;
  std::size_t embedding = 32;
  std::size_t hidden = 64;

  nn::LstmSpec encoder() const { return {"encoder", 2 * follower::feature_width(), hidden}; }
  nn::LstmSpec decoder() const { return {"decoder", embedding, hidden}; }

  nlohmann::json to_json() const;
  static SpeakerConfig from_json(const nlohmann::json& j);
  friend bool operator==(const SpeakerConfig&, const SpeakerConfig&) = default;
};

inline constexpr const char* kSpeakerKind = "speaker";

// Parameter names: embedding [V, E], encoder.{w,b}, decoder.{w,b},
// output.w [V, 2H], output.b [V].
nn::ParamSet speaker_layout(const SpeakerConfig& config);
nn::ParamSet init_speaker(const SpeakerConfig& config, std::uint64_t seed);

struct SpeakerModel {
  SpeakerConfig config;
  nn::ParamSet params;
};

// One row per action of the route: [mean of the 36 views, u of the action].
nn::Tensor route_features(const world::NavGraph& graph, const world::Route& route);

struct EncodedRoute {
  nn::Var states;  // [steps, H]
  nn::LstmState final;
};

EncodedRoute encode_route(nn::Tape& tape, const SpeakerConfig& config, const nn::Tensor& features);

// Feeds `prev_token`, advances `state` and returns next-token logits [V].
nn::Var next_token_logits(nn::Tape& tape, const SpeakerConfig& config, const EncodedRoute& encoded,
                          nn::LstmState& state, int prev_token);

// Tokens up to and including the first EOS. Throws std::invalid_argument
// when there is no EOS or a token id is outside the vocabulary.
std::vector<int> scored_tokens(const world::Instruction& instruction, std::size_t vocab_size);

// Summed negative log-likelihood of the scored tokens.
nn::Var instruction_nll(nn::Tape& tape, const SpeakerConfig& config, const nn::Tensor& features,
                        const world::Instruction& instruction);

double speaker_logprob(const SpeakerModel& model, const world::NavGraph& graph,
                       const world::Instruction& instruction, const world::Route& route);

// Per-position conditionals log p(token_w | prefix, route) of the scored tokens.
std::vector<double> speaker_step_logprobs(const SpeakerModel& model, const world::NavGraph& graph,
                                          const world::Instruction& instruction, const world::Route& route);

// Greedy decoding. PAD and BOS are never emitted; ties go to the lowest id;
// EOS is forced at the token cap.
world::Instruction speaker_generate(const SpeakerModel& model, const world::NavGraph& graph,
                                    const world::Route& route);

struct SpeakerTrainConfig {
  int iterations = 1500;
  int batch_size = 16;
  nn::AdamConfig adam;
  double clip_norm = 5.0;
  int log_every = 100;
  std::uint64_t seed = 0;
};

struct SpeakerLogEntry {
  int iteration = 0;
  double loss = 0;  // mean per-token cross-entropy
  double grad_norm = 0;
  std::optional<double> val_perplexity;
  double seconds = 0;
};

double perplexity(const SpeakerModel& model, const std::vector<world::DatasetExample>& examples,
                  const std::vector<world::NavGraph>& environments);

std::vector<SpeakerLogEntry> train_speaker(SpeakerModel& model, const std::vector<world::DatasetExample>& examples,
                                           const std::vector<world::NavGraph>& environments,
                                           const SpeakerTrainConfig& config,
                                           const std::vector<world::DatasetExample>* validation = nullptr,
                                           const std::function<void(const SpeakerLogEntry&)>& on_log = {});

}  // namespace pragnav::speaker
