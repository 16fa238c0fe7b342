#include "pragnav/nn/tape.hpp"

#include <stdexcept>

namespace pragnav::nn {

const Tensor& Var::value() const { return tape->value(id); }

Real Var::item() const {
  const auto& v = value();
  if (v.size() != 1) throw std::logic_error("item() on a tensor with " + std::to_string(v.size()) + " values");
  return v[0];
}

Tape::Tape(const ParamSet& params, ParamSet* grad_sink) : params_(&params), sink_(grad_sink) {
  if (sink_ && !sink_->same_layout(params)) {
    throw std::invalid_argument("gradient sink layout does not match parameters");
  }
  nodes_.reserve(256);
}

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(std::span<const Real> values) {
  return constant(Tensor::vector({values.begin(), values.end()}));
}

Var Tape::param(std::string_view name) {
  std::string key(name);
  if (auto it = param_ids_.find(key); it != param_ids_.end()) return {this, it->second};
  Node node;
  node.external = &params_->at(name);
  if (sink_) {
    node.sink = &sink_->at(name);
    node.needs_grad = true;
  }
  nodes_.push_back(std::move(node));
  const int id = static_cast<int>(nodes_.size()) - 1;
  param_ids_.emplace(std::move(key), id);
  return {this, id};
}

const Tensor& Tape::value(int id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

std::span<Real> Tape::grad(int id) {
  Node& n = nodes_[id];
  if (n.sink) return n.sink->values();
  if (n.grad.empty()) n.grad.assign(value(id).size(), Real{0});
  return n.grad;
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, Backprop backprop) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backprop));
}

Var Tape::record(Tensor value, std::span<const Var> inputs, Backprop backprop) {
  Node node;
  node.value = std::move(value);
  if (recording()) {
    for (const Var& in : inputs) {
      if (in.tape != this) throw std::logic_error("operands recorded on different tapes");
      node.needs_grad = node.needs_grad || nodes_[in.id].needs_grad;
    }
    if (node.needs_grad) node.backprop = std::move(backprop);
  }
  nodes_.push_back(std::move(node));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Var scalar) {
  if (!recording()) throw std::logic_error("backward() on an inference tape");
  if (scalar.tape != this || value(scalar.id).size() != 1) {
    throw std::invalid_argument("backward() needs a one-element value from this tape");
  }
  if (!nodes_[scalar.id].needs_grad) return;
  grad(scalar.id)[0] += 1;
  for (int id = scalar.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.backprop && !n.grad.empty()) n.backprop(*this, id);
  }
}

}  // namespace pragnav::nn
