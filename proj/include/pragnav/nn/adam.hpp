#pragma once

#include <cstdint>

#include "pragnav/nn/tensor.hpp"

namespace pragnav::nn {

struct AdamConfig {
  Real learning_rate = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
};

struct OptimizerState {
  AdamConfig config;
  std::int64_t step = 0;
  ParamSet first_moment;
  ParamSet second_moment;

  static OptimizerState for_params(const ParamSet& params, AdamConfig config = {});
};

// Bias-corrected adaptive-moment update. Throws std::invalid_argument when
// gradient or accumulator layouts differ from the parameters.
void adam_step(ParamSet& params, const ParamSet& grads, OptimizerState& state);

// Rescales `grads` so its global L2 norm is at most `max_norm`; returns the
// norm before clipping.
Real clip_global_norm(ParamSet& grads, Real max_norm);

}  // namespace pragnav::nn
