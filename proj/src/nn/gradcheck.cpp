#include "pragnav/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pragnav/common/random.hpp"

namespace pragnav::nn {

LossAndGrads forward_backward(const LossBuilder& build, const ParamSet& params) {
  LossAndGrads out{0, params.zeros_like()};
  Tape tape(params, &out.grads);
  Var loss = build(tape);
  out.loss = loss.item();
  if (!std::isfinite(out.loss)) throw NonFiniteError("loss is not finite");
  tape.backward(loss);
  for (const auto& [name, g] : out.grads) {
    if (!g.all_finite()) throw NonFiniteError("gradient of parameter '" + name + "' is not finite");
  }
  return out;
}

Real evaluate_loss(const LossBuilder& build, const ParamSet& params) {
  Tape tape(params);
  return build(tape).item();
}

Real relative_error(Real analytic, Real numeric, Real floor) {
  const Real scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport check_gradients(const LossBuilder& build, const ParamSet& params,
                                std::size_t samples_per_param, std::uint64_t seed, Real step) {
  const auto analytic = forward_backward(build, params);
  // one ulp of the loss in (up - down) / 2h is eps*|L|/h; below 1e4 times that
  // a 1e-4 relative comparison only measures rounding
  const Real floor = std::max<Real>(
      1e-6, 1e4 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::abs(analytic.loss)) / step);
  ParamSet probe = params;
  GradCheckReport report;
  report.floor = floor;
  Rng rng(seed);
  for (auto& [name, tensor] : probe) {
    std::vector<std::size_t> idx(tensor.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(std::min(samples_per_param, idx.size()));
    for (std::size_t i : idx) {
      const Real original = tensor[i];
      tensor[i] = original + step;
      const Real up = evaluate_loss(build, probe);
      tensor[i] = original - step;
      const Real down = evaluate_loss(build, probe);
      tensor[i] = original;
      const Real numeric = (up - down) / (2 * step);
      const Real a = analytic.grads.at(name)[i];
      const Real err = relative_error(a, numeric, floor);
      ++report.checked;
      if (err > report.max_relative_error || report.worst_parameter.empty()) {
        report = {err, name, i, a, numeric, report.checked, floor};
      }
    }
  }
  return report;
}

}  // namespace pragnav::nn
