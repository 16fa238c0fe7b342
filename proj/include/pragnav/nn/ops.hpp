#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pragnav/nn/tape.hpp"

// The operator set shared by the follower and speaker graphs. Every operator
// records its own backward rule; shapes are checked eagerly and mismatches
// throw std::invalid_argument.
namespace pragnav::nn {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, Real factor);

Var sigmoid(Var a);
Var tanh(Var a);
Var exp(Var a);
Var log(Var a);

Var softmax(Var logits);
Var log_softmax(Var logits);

// W[m,n] x[n] -> [m]
Var matvec(Var w, Var x);
// W[m,n]^T x[m] -> [n]
Var matvec_t(Var w, Var x);
// A[m,k] B[k,n] -> [m,n]
Var matmul(Var a, Var b);

Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
// Stacks equal-length vectors into a [parts, length] matrix.
Var stack_rows(std::span<const Var> rows);
Var slice(Var a, std::size_t offset, std::size_t length);
// Row `index` of a [rows, cols] table (embedding lookup).
Var row(Var table, std::size_t index);

Var sum(Var a);
Var dot(Var a, Var b);
Var pick(Var a, std::size_t index);

// Low-level kernels, exposed for inference code that bypasses the tape.
Real dot_kernel(const Real* a, const Real* b, std::size_t n);
void axpy_kernel(Real alpha, const Real* x, Real* y, std::size_t n);
void softmax_in_place(std::span<Real> values);

}  // namespace pragnav::nn
