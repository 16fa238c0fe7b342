#include "pragnav/nn/lstm.hpp"

#include <stdexcept>

#include "pragnav/common/random.hpp"
#include "pragnav/nn/ops.hpp"

namespace pragnav::nn {

void add_lstm_params(ParamSet& params, const LstmSpec& spec) {
  params.add(spec.weight_name(), Tensor({4 * spec.hidden, spec.input + spec.hidden}));
  params.add(spec.bias_name(), Tensor({4 * spec.hidden}));
}

void set_forget_bias(ParamSet& params, const LstmSpec& spec, Real value) {
  auto& b = params.at(spec.bias_name());
  for (std::size_t i = spec.hidden; i < 2 * spec.hidden; ++i) b[i] = value;
}

LstmState lstm_zero_state(Tape& tape, const LstmSpec& spec) {
  return {tape.constant(Tensor({spec.hidden})), tape.constant(Tensor({spec.hidden}))};
}

LstmState lstm_step(Tape& tape, const LstmSpec& spec, Var x, const LstmState& prev) {
  if (x.size() != spec.input) {
    throw std::invalid_argument(spec.prefix + ": LSTM input has " + std::to_string(x.size()) +
                                " values, expected " + std::to_string(spec.input));
  }
  const std::size_t h = spec.hidden;
  Var gates = add(matvec(tape.param(spec.weight_name()), concat({x, prev.h})), tape.param(spec.bias_name()));
  Var input_gate = sigmoid(slice(gates, 0, h));
  Var forget_gate = sigmoid(slice(gates, h, h));
  Var candidate = tanh(slice(gates, 2 * h, h));
  Var output_gate = sigmoid(slice(gates, 3 * h, h));
  Var cell = add(mul(forget_gate, prev.c), mul(input_gate, candidate));
  return {mul(output_gate, tanh(cell)), cell};
}

void init_uniform(ParamSet& params, std::uint64_t seed, Real scale) {
  for (auto& [name, tensor] : params) {
    Rng rng(derive_seed(seed, name));
    for (auto& v : tensor.values()) v = rng.uniform(-scale, scale);
  }
}

}  // namespace pragnav::nn
