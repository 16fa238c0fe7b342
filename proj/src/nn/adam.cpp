#include "pragnav/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace pragnav::nn {

OptimizerState OptimizerState::for_params(const ParamSet& params, AdamConfig config) {
  return {config, 0, params.zeros_like(), params.zeros_like()};
}

void adam_step(ParamSet& params, const ParamSet& grads, OptimizerState& state) {
  if (!params.same_layout(grads)) throw std::invalid_argument("adam_step: gradient shapes differ from parameters");
  if (!params.same_layout(state.first_moment) || !params.same_layout(state.second_moment)) {
    throw std::invalid_argument("adam_step: optimizer accumulators do not match parameters");
  }
  const auto& c = state.config;
  ++state.step;
  const Real correction1 = 1 - std::pow(c.beta1, static_cast<Real>(state.step));
  const Real correction2 = 1 - std::pow(c.beta2, static_cast<Real>(state.step));

  auto g_it = grads.begin();
  auto m_it = state.first_moment.begin();
  auto v_it = state.second_moment.begin();
  for (auto p_it = params.begin(); p_it != params.end(); ++p_it, ++g_it, ++m_it, ++v_it) {
    auto p = p_it->second.values();
    auto g = g_it->second.values();
    auto m = m_it->second.values();
    auto v = v_it->second.values();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1 - c.beta2) * g[i] * g[i];
      const Real m_hat = m[i] / correction1;
      const Real v_hat = v[i] / correction2;
      p[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

Real clip_global_norm(ParamSet& grads, Real max_norm) {
  const Real norm = std::sqrt(grads.squared_norm());
  if (norm > max_norm && norm > 0) grads.scale(max_norm / norm);
  return norm;
}

}  // namespace pragnav::nn
