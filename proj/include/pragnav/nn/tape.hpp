#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pragnav/nn/tensor.hpp"

namespace pragnav::nn {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Tensor& value() const;
  std::span<const Real> values() const { return value().values(); }
  std::size_t size() const { return value().size(); }
  Real item() const;  // the single value of a one-element tensor
};

// Reverse-mode autodiff tape. Parameters are read in place from a bound
// ParamSet; when a gradient sink is supplied, backward() accumulates
// parameter gradients straight into it, so several tapes can share one sink
// to sum gradients over a batch. A tape without a sink records no backward
// closures and serves inference.
class Tape {
 public:
  using Backprop = std::function<void(Tape&, int self)>;

  explicit Tape(const ParamSet& params, ParamSet* grad_sink = nullptr);
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return sink_ != nullptr; }
  const ParamSet& params() const { return *params_; }

  Var constant(Tensor value);
  Var constant(std::span<const Real> values);
  Var param(std::string_view name);

  // Runs backpropagation from a one-element value.
  void backward(Var scalar);

  // Interface for operator implementations.
  Var record(Tensor value, std::initializer_list<Var> inputs, Backprop backprop);
  Var record(Tensor value, std::span<const Var> inputs, Backprop backprop);
  const Tensor& value(int id) const;
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  std::span<Real> grad(int id);
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Tensor* sink = nullptr;
    std::vector<Real> grad;
    bool needs_grad = false;
    Backprop backprop;
  };

  const ParamSet* params_;
  ParamSet* sink_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> param_ids_;
};

}  // namespace pragnav::nn
