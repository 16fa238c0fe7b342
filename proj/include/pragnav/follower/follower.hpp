#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "pragnav/follower/observation.hpp"
#include "pragnav/nn/lstm.hpp"
#include "pragnav/world/instructions.hpp"

namespace pragnav::follower {

struct FollowerConfig {
  std::size_t vocab_size = 0;
  std::size_t embedding = 32;
  std::size_t hidden = 64;
  std::size_t attention = 32;  // rank of the W1/W2 and W3/W4 bilinear forms

  nn::LstmSpec encoder() const { return {"encoder", embedding, hidden}; }
  nn::LstmSpec decoder() const { return {"decoder", 2 * feature_width() + hidden, hidden}; }

  nlohmann::json to_json() const;
  static FollowerConfig from_json(const nlohmann::json& j);
  friend bool operator==(const FollowerConfig&, const FollowerConfig&) = default;
};

inline constexpr const char* kFollowerKind = "follower";

// Parameter names:
//   embedding [V, E]
//   encoder.{w,b}, decoder.{w,b}
//   visual.query [A, H] (W1), visual.key [A, F] (W2)
//   action.query [A, H] (W3), action.key [A, F] (W4)
nn::ParamSet follower_layout(const FollowerConfig& config);
nn::ParamSet init_follower(const FollowerConfig& config, std::uint64_t seed);

struct FollowerModel {
  FollowerConfig config;
  nn::ParamSet params;
};

struct EncodedInstruction {
  nn::Var states;  // [T, H]
  nn::LstmState final;
};

EncodedInstruction encode_instruction(nn::Tape& tape, const FollowerConfig& config,
                                      const world::Instruction& instruction);

struct DecoderState {
  nn::LstmState lstm;
  nn::Var prev_action;  // u of the previous action; zero before the first step
};

DecoderState initial_decoder_state(nn::Tape& tape, const EncodedInstruction& encoded);

struct DecoderStep {
  DecoderState next;  // prev_action still unset; see advance()
  nn::Var visual_weights;  // [36]
  nn::Var text_weights;    // [T]
  nn::Var logits;          // [1 + J]
  nn::Var log_probs;       // [1 + J]
};

// One decision: attend over the panorama with h_{t-1}, attend over the
// instruction, update the decoder and score the candidate actions.
DecoderStep follower_step(nn::Tape& tape, const FollowerConfig& config, const EncodedInstruction& encoded,
                          const DecoderState& prev, const PanoObservation& obs);

// Decoder state to carry into the next decision after taking `slot`.
DecoderState advance(nn::Tape& tape, const DecoderStep& step, const PanoObservation& obs, std::size_t slot);

// log P(route | instruction): the sum of per-step log-probabilities of the
// route's actions. Throws std::invalid_argument if the route is malformed or
// takes an action the observation does not offer.
double follower_logprob(const FollowerModel& model, const world::NavGraph& graph,
                        const world::Instruction& instruction, const world::Route& route);

// Step-at-a-time inference for one instruction. The encoder runs once; the
// carried memory is plain values so search can fork it freely.
class FollowerSession {
 public:
  struct Memory {
    std::vector<nn::Real> h, c, prev_action;
  };

  struct Step {
    PanoObservation obs;
    std::vector<nn::Real> log_probs;       // indexed by action slot
    std::vector<nn::Real> visual_weights;  // [36]
    Memory next;  // h and c after this decision; prev_action filled by after()
  };

  FollowerSession(const FollowerModel& model, const world::Instruction& instruction);

  Memory start() const;
  Step step(const Memory& memory, const world::NavGraph& graph, const world::AgentState& state) const;
  Step step(const Memory& memory, PanoObservation obs) const;
  static Memory after(const Step& step, std::size_t slot);

 private:
  const FollowerModel* model_;
  nn::Tensor encoder_states_;
  Memory start_;
};

}  // namespace pragnav::follower
