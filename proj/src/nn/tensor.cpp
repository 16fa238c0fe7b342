#include "pragnav/nn/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pragnav::nn {

std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, Real fill) : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<Real> values) : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != element_count(shape_)) {
    throw std::invalid_argument("tensor value count does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::vector(std::vector<Real> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

bool Tensor::all_finite() const {
  for (Real v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor& ParamSet::add(const std::string& name, Tensor tensor) {
  auto [it, inserted] = tensors_.emplace(name, std::move(tensor));
  if (!inserted) throw std::invalid_argument("duplicate parameter name: " + name);
  return it->second;
}

Tensor& ParamSet::at(std::string_view name) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw std::out_of_range("unknown parameter: " + std::string(name));
  return it->second;
}

const Tensor& ParamSet::at(std::string_view name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw std::out_of_range("unknown parameter: " + std::string(name));
  return it->second;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [_, t] : tensors_) n += t.size();
  return n;
}

ParamSet ParamSet::zeros_like() const {
  ParamSet out;
  for (const auto& [name, t] : tensors_) out.add(name, Tensor(t.shape()));
  return out;
}

void ParamSet::fill(Real value) {
  for (auto& [_, t] : tensors_) {
    for (auto& v : t.values()) v = value;
  }
}

bool ParamSet::same_layout(const ParamSet& other) const {
  if (size() != other.size()) return false;
  auto a = tensors_.begin();
  auto b = other.tensors_.begin();
  for (; a != tensors_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.shape() != b->second.shape()) return false;
  }
  return true;
}

void ParamSet::accumulate(const ParamSet& other, Real scale) {
  if (!same_layout(other)) throw std::invalid_argument("parameter layouts differ");
  auto b = other.tensors_.begin();
  for (auto a = tensors_.begin(); a != tensors_.end(); ++a, ++b) {
    auto dst = a->second.values();
    auto src = b->second.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  }
}

void ParamSet::scale(Real factor) {
  for (auto& [_, t] : tensors_) {
    for (auto& v : t.values()) v *= factor;
  }
}

Real ParamSet::squared_norm() const {
  Real total = 0;
  for (const auto& [_, t] : tensors_) {
    for (Real v : t.values()) total += v * v;
  }
  return total;
}

}  // namespace pragnav::nn
