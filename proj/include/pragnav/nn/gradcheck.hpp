#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "pragnav/nn/tape.hpp"

namespace pragnav::nn {

using LossBuilder = std::function<Var(Tape&)>;

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LossAndGrads {
  Real loss = 0;
  ParamSet grads;
};

// Evaluates the scalar loss built by `build` and its gradient with respect to
// every parameter. Throws NonFiniteError naming the offending parameter when
// the loss or any gradient is not finite.
LossAndGrads forward_backward(const LossBuilder& build, const ParamSet& params);

// Loss value only, on an inference tape.
Real evaluate_loss(const LossBuilder& build, const ParamSet& params);

struct GradCheckReport {
  Real max_relative_error = 0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  Real analytic_at_worst = 0;
  Real numeric_at_worst = 0;
  std::size_t checked = 0;
  Real floor = 0;  // denominator floor used for this loss
};

// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
// gradient is ~0 from being judged on rounding noise alone.
Real relative_error(Real analytic, Real numeric, Real floor = 1e-6);

// Compares analytic gradients with centered finite differences on up to
// `samples_per_param` randomly chosen entries of every parameter. The
// relative-error floor grows with |loss| / step.
GradCheckReport check_gradients(const LossBuilder& build, const ParamSet& params,
                                std::size_t samples_per_param, std::uint64_t seed, Real step = 1e-5);

}  // namespace pragnav::nn
