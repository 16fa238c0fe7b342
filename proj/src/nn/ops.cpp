#include "pragnav/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pragnav::nn {
namespace {

void require(bool ok, const char* op, const std::string& detail) {
  if (!ok) throw std::invalid_argument(std::string(op) + ": " + detail);
}

void fail_shapes(const char* op, const Shape& a, const char* sep, const Shape& b) {
  throw std::invalid_argument(std::string(op) + ": " + shape_string(a) + sep + shape_string(b));
}

void require_same_size(Var a, Var b, const char* op) {
  if (a.size() != b.size()) fail_shapes(op, a.value().shape(), " vs ", b.value().shape());
}

Tensor like(const Tensor& t) { return Tensor(t.shape()); }

// Elementwise unary op whose derivative is expressible from input and output.
template <typename Fwd, typename Deriv>
Var unary(Var a, Fwd fwd, Deriv deriv) {
  const Tensor& in = a.value();
  Tensor out = like(in);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fwd(in[i]);
  const int ai = a.id;
  return a.tape->record(std::move(out), {a}, [ai, deriv](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const auto& x = t.value(ai);
    const auto& y = t.value(self);
    const auto g = t.grad(self);
    auto gx = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * deriv(x[i], y[i]);
  });
}

}  // namespace

Real dot_kernel(const Real* a, const Real* b, std::size_t n) {
  Real s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy_kernel(Real alpha, const Real* x, Real* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void softmax_in_place(std::span<Real> values) {
  const Real peak = *std::max_element(values.begin(), values.end());
  Real total = 0;
  for (auto& v : values) {
    v = std::exp(v - peak);
    total += v;
  }
  for (auto& v : values) v /= total;
}

Var add(Var a, Var b) {
  require_same_size(a, b, "add");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const int ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const auto g = t.grad(self);
    for (int in : {ai, bi}) {
      if (!t.needs_grad(in)) continue;
      auto gi = t.grad(in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

Var sub(Var a, Var b) {
  require_same_size(a, b, "sub");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const int ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const auto g = t.grad(self);
    if (t.needs_grad(ai)) {
      auto ga = t.grad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (t.needs_grad(bi)) {
      auto gb = t.grad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_size(a, b, "mul");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const auto g = t.grad(self);
    const auto& av = t.value(ai);
    const auto& bv2 = t.value(bi);
    if (t.needs_grad(ai)) {
      auto ga = t.grad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv2[i];
    }
    if (t.needs_grad(bi)) {
      auto gb = t.grad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var scale(Var a, Real factor) {
  Tensor out = a.value();
  for (auto& v : out.values()) v *= factor;
  const int ai = a.id;
  return a.tape->record(std::move(out), {a}, [ai, factor](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const auto g = t.grad(self);
    auto ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var sigmoid(Var a) {
  return unary(
      a, [](Real x) { return x >= 0 ? 1 / (1 + std::exp(-x)) : std::exp(x) / (1 + std::exp(x)); },
      [](Real, Real y) { return y * (1 - y); });
}

Var tanh(Var a) {
  return unary(a, [](Real x) { return std::tanh(x); }, [](Real, Real y) { return 1 - y * y; });
}

Var exp(Var a) {
  return unary(a, [](Real x) { return std::exp(x); }, [](Real, Real y) { return y; });
}

Var log(Var a) {
  return unary(a, [](Real x) { return std::log(x); }, [](Real x, Real) { return 1 / x; });
}

Var softmax(Var logits) {
  require(logits.size() > 0, "softmax", "empty input");
  Tensor out = logits.value();
  softmax_in_place(out.values());
  const int ai = logits.id;
  return logits.tape->record(std::move(out), {logits}, [ai](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const auto g = t.grad(self);
    const auto& p = t.value(self);
    const Real inner = dot_kernel(g.data(), p.data(), g.size());
    auto ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += p[i] * (g[i] - inner);
  });
}

Var log_softmax(Var logits) {
  require(logits.size() > 0, "log_softmax", "empty input");
  const Tensor& in = logits.value();
  const Real peak = *std::max_element(in.values().begin(), in.values().end());
  Real total = 0;
  for (Real v : in.values()) total += std::exp(v - peak);
  const Real shift = peak + std::log(total);
  Tensor out = like(in);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - shift;
  const int ai = logits.id;
  return logits.tape->record(std::move(out), {logits}, [ai](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const auto g = t.grad(self);
    const auto& lp = t.value(self);
    Real g_total = 0;
    for (Real v : g) g_total += v;
    auto ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] - std::exp(lp[i]) * g_total;
  });
}

Var matvec(Var w, Var x) {
  const Tensor& wv = w.value();
  if (wv.rank() != 2 || wv.cols() != x.size()) fail_shapes("matvec", wv.shape(), " x ", x.value().shape());
  const std::size_t m = wv.rows(), n = wv.cols();
  Tensor out({m});
  const Real* xv = x.value().data();
  for (std::size_t i = 0; i < m; ++i) out[i] = dot_kernel(wv.data() + i * n, xv, n);
  const int wi = w.id, xi = x.id;
  return w.tape->record(std::move(out), {w, x}, [wi, xi, m, n](Tape& t, int self) {
    const auto g = t.grad(self);
    const Real* W = t.value(wi).data();
    if (t.needs_grad(wi)) {
      const Real* xv2 = t.value(xi).data();
      Real* gw = t.grad(wi).data();
      for (std::size_t i = 0; i < m; ++i) {
        if (g[i] != 0) axpy_kernel(g[i], xv2, gw + i * n, n);
      }
    }
    if (t.needs_grad(xi)) {
      Real* gx = t.grad(xi).data();
      for (std::size_t i = 0; i < m; ++i) {
        if (g[i] != 0) axpy_kernel(g[i], W + i * n, gx, n);
      }
    }
  });
}

Var matvec_t(Var w, Var x) {
  const Tensor& wv = w.value();
  if (wv.rank() != 2 || wv.rows() != x.size()) fail_shapes("matvec_t", wv.shape(), "^T x ", x.value().shape());
  const std::size_t m = wv.rows(), n = wv.cols();
  Tensor out({n});
  const Real* xv = x.value().data();
  for (std::size_t i = 0; i < m; ++i) {
    if (xv[i] != 0) axpy_kernel(xv[i], wv.data() + i * n, out.data(), n);
  }
  const int wi = w.id, xi = x.id;
  return w.tape->record(std::move(out), {w, x}, [wi, xi, m, n](Tape& t, int self) {
    const auto g = t.grad(self);
    if (t.needs_grad(wi)) {
      const Real* xv2 = t.value(xi).data();
      Real* gw = t.grad(wi).data();
      for (std::size_t i = 0; i < m; ++i) {
        if (xv2[i] != 0) axpy_kernel(xv2[i], g.data(), gw + i * n, n);
      }
    }
    if (t.needs_grad(xi)) {
      const Real* W = t.value(wi).data();
      auto gx = t.grad(xi);
      for (std::size_t i = 0; i < m; ++i) gx[i] += dot_kernel(W + i * n, g.data(), n);
    }
  });
}

Var matmul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() != 2 || av.cols() != bv.rows()) fail_shapes("matmul", av.shape(), " x ", bv.shape());
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      axpy_kernel(av.at(i, p), bv.data() + p * n, out.data() + i * n, n);
    }
  }
  const int ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), {a, b}, [ai, bi, m, k, n](Tape& t, int self) {
    const auto g = t.grad(self);
    const Real* A = t.value(ai).data();
    const Real* B = t.value(bi).data();
    if (t.needs_grad(ai)) {
      Real* ga = t.grad(ai).data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) ga[i * k + p] += dot_kernel(g.data() + i * n, B + p * n, n);
      }
    }
    if (t.needs_grad(bi)) {
      Real* gb = t.grad(bi).data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) axpy_kernel(A[i * k + p], g.data() + i * n, gb + p * n, n);
      }
    }
  });
}

Var concat(std::span<const Var> parts) {
  require(!parts.empty(), "concat", "no inputs");
  std::size_t total = 0;
  for (const Var& p : parts) total += p.size();
  Tensor out({total});
  std::vector<int> ids;
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const auto v = p.values();
    std::copy(v.begin(), v.end(), out.data() + offset);
    ids.push_back(p.id);
    offsets.push_back(offset);
    offset += v.size();
  }
  return parts.front().tape->record(std::move(out), parts, [ids, offsets](Tape& t, int self) {
    const auto g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!t.needs_grad(ids[k])) continue;
      auto gi = t.grad(ids[k]);
      for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[offsets[k] + i];
    }
  });
}

Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}

Var stack_rows(std::span<const Var> rows) {
  require(!rows.empty(), "stack_rows", "no inputs");
  const std::size_t width = rows.front().size();
  for (const Var& r : rows) require(r.size() == width, "stack_rows", "ragged rows");
  Var flat = concat(rows);
  // Reshape in place: the recorded node owns its tensor.
  Tensor reshaped({rows.size(), width}, {flat.values().begin(), flat.values().end()});
  const int fi = flat.id;
  return flat.tape->record(std::move(reshaped), {flat}, [fi](Tape& t, int self) {
    if (!t.needs_grad(fi)) return;
    const auto g = t.grad(self);
    auto gf = t.grad(fi);
    for (std::size_t i = 0; i < g.size(); ++i) gf[i] += g[i];
  });
}

Var slice(Var a, std::size_t offset, std::size_t length) {
  require(offset + length <= a.size(), "slice", "range out of bounds");
  const auto v = a.values();
  Tensor out({length}, std::vector<Real>(v.begin() + offset, v.begin() + offset + length));
  const int ai = a.id;
  return a.tape->record(std::move(out), {a}, [ai, offset](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const auto g = t.grad(self);
    auto ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[offset + i] += g[i];
  });
}

Var row(Var table, std::size_t index) {
  const Tensor& tv = table.value();
  require(tv.rank() == 2 && index < tv.rows(), "row", "index out of range");
  const std::size_t n = tv.cols();
  Tensor out({n}, std::vector<Real>(tv.data() + index * n, tv.data() + (index + 1) * n));
  const int ti = table.id;
  return table.tape->record(std::move(out), {table}, [ti, index, n](Tape& t, int self) {
    if (!t.needs_grad(ti)) return;
    const auto g = t.grad(self);
    Real* gt = t.grad(ti).data() + index * n;
    for (std::size_t i = 0; i < n; ++i) gt[i] += g[i];
  });
}

Var sum(Var a) {
  Real total = 0;
  for (Real v : a.values()) total += v;
  const int ai = a.id;
  return a.tape->record(Tensor::vector({total}), {a}, [ai](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    const Real g = t.grad(self)[0];
    for (auto& v : t.grad(ai)) v += g;
  });
}

Var dot(Var a, Var b) {
  require_same_size(a, b, "dot");
  const Real value = dot_kernel(a.value().data(), b.value().data(), a.size());
  const int ai = a.id, bi = b.id;
  return a.tape->record(Tensor::vector({value}), {a, b}, [ai, bi](Tape& t, int self) {
    const Real g = t.grad(self)[0];
    if (t.needs_grad(ai)) axpy_kernel(g, t.value(bi).data(), t.grad(ai).data(), t.value(ai).size());
    if (t.needs_grad(bi)) axpy_kernel(g, t.value(ai).data(), t.grad(bi).data(), t.value(bi).size());
  });
}

Var pick(Var a, std::size_t index) {
  require(index < a.size(), "pick", "index out of range");
  const int ai = a.id;
  return a.tape->record(Tensor::vector({a.values()[index]}), {a}, [ai, index](Tape& t, int self) {
    if (!t.needs_grad(ai)) return;
    t.grad(ai)[index] += t.grad(self)[0];
  });
}

}  // namespace pragnav::nn
