#pragma once

#include <cstdint>
#include <string>

#include "pragnav/nn/tape.hpp"

namespace pragnav::nn {

// Single-layer LSTM cell. Parameters live under `<prefix>.w` with shape
// [4*hidden, input+hidden] (gate rows ordered input, forget, candidate,
// output) and `<prefix>.b` with shape [4*hidden].
struct LstmSpec {
  std::string prefix;
  std::size_t input = 0;
  std::size_t hidden = 0;

  std::string weight_name() const { return prefix + ".w"; }
  std::string bias_name() const { return prefix + ".b"; }
};

struct LstmState {
  Var h;
  Var c;
};

void add_lstm_params(ParamSet& params, const LstmSpec& spec);
void set_forget_bias(ParamSet& params, const LstmSpec& spec, Real value);

LstmState lstm_zero_state(Tape& tape, const LstmSpec& spec);

// gates = W [x; h_prev] + b
// c = sigmoid(f) * c_prev + sigmoid(i) * tanh(g)
// h = sigmoid(o) * tanh(c)
LstmState lstm_step(Tape& tape, const LstmSpec& spec, Var x, const LstmState& prev);

// Every tensor uniform in (-scale, scale), each from its own stream derived
// from (seed, parameter name), so adding a parameter never perturbs others.
void init_uniform(ParamSet& params, std::uint64_t seed, Real scale);

}  // namespace pragnav::nn
