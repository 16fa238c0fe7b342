#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pragnav::nn {

using Real = double;
using Shape = std::vector<std::size_t>;

// Dense row-major array. Rank 1 and rank 2 are the only ranks the operator
// set produces; parameters may be either.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = 0);
  Tensor(Shape shape, std::vector<Real> values);

  static Tensor vector(std::vector<Real> values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rank() const { return shape_.size(); }
  // Rank-2 views; a rank-1 tensor reads as a single row.
  std::size_t rows() const { return shape_.size() == 2 ? shape_[0] : 1; }
  std::size_t cols() const { return shape_.empty() ? 0 : shape_.back(); }

  std::span<Real> values() { return values_; }
  std::span<const Real> values() const { return values_; }
  Real* data() { return values_.data(); }
  const Real* data() const { return values_.data(); }

  Real& operator[](std::size_t i) { return values_[i]; }
  Real operator[](std::size_t i) const { return values_[i]; }
  Real& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  Real at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<Real> values_;
};

std::size_t element_count(const Shape& shape);
std::string shape_string(const Shape& shape);

// Named parameter tensors, iterated in name order.
class ParamSet {
 public:
  using Map = std::map<std::string, Tensor, std::less<>>;

  Tensor& add(const std::string& name, Tensor tensor);
  Tensor& at(std::string_view name);
  const Tensor& at(std::string_view name) const;
  bool contains(std::string_view name) const { return tensors_.find(name) != tensors_.end(); }
  std::size_t size() const { return tensors_.size(); }
  std::size_t scalar_count() const;

  ParamSet zeros_like() const;
  void fill(Real value);
  // this += scale * other; names and shapes must match.
  void accumulate(const ParamSet& other, Real scale = 1);
  void scale(Real factor);
  Real squared_norm() const;
  bool same_layout(const ParamSet& other) const;

  Map::iterator begin() { return tensors_.begin(); }
  Map::iterator end() { return tensors_.end(); }
  Map::const_iterator begin() const { return tensors_.begin(); }
  Map::const_iterator end() const { return tensors_.end(); }

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  Map tensors_;
};

}  // namespace pragnav::nn
