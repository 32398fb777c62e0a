// Copyright 2026 The rfsdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rfsdrive/autodiff/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rfsdrive/errors.hpp"

namespace rfsdrive::ad
{

namespace
{

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using DataPtr = std::shared_ptr<TensorData>;

[[noreturn]] void shape_error(const char * op, const std::string & what)
{
  throw ContractViolation(std::string(op) + ": " + what);
}

[[noreturn]] void shape_error(const char * op, const std::string & what, const Tensor & a)
{
  shape_error(op, what + " (got " + shape_str(a.shape()) + ")");
}

[[noreturn]] void shape_error(
  const char * op, const std::string & what, const Tensor & a, const Tensor & b)
{
  shape_error(op, what + " (got " + shape_str(a.shape()) + " and " + shape_str(b.shape()) + ")");
}

void require_defined(const char * op, const Tensor & t)
{
  if (!t.defined()) {
    shape_error(op, "undefined input tensor");
  }
}

// Rows/cols of a rank-1 (treated as one row) or rank-2 tensor.
std::pair<std::size_t, std::size_t> as_matrix(const char * op, const Tensor & t)
{
  require_defined(op, t);
  if (t.rank() == 1) {
    return {1, t.shape()[0]};
  }
  if (t.rank() == 2) {
    return {t.shape()[0], t.shape()[1]};
  }
  shape_error(op, "expected rank 1 or 2", t);
}

bool tracking(bool any_requires)
{
  return any_requires && Tape::active().recording();
}

Tensor finish(const char * op, Shape shape, std::vector<double> values, bool requires_grad)
{
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string(op) + ": produced a non-finite value");
    }
  }
  return make_output(std::move(shape), std::move(values), requires_grad);
}

void record(const char * op, Tape::BackwardFn fn)
{
  Tape::active().record(op, std::move(fn));
}

template <typename Forward, typename Derivative>
Tensor unary(const char * op, const Tensor & a, Forward f, Derivative df)
{
  require_defined(op, a);
  const auto & x = a.values();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = f(x[i]);
  }
  const bool req = tracking(a.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr Y = out.data();
    record(op, [A, Y, df] {
      if (Y->grad.empty()) {
        return;
      }
      auto & ga = A->grad_buffer();
      for (std::size_t i = 0; i < ga.size(); ++i) {
        ga[i] += Y->grad[i] * df(A->values[i], Y->values[i]);
      }
    });
  }
  return out;
}

}  // namespace

Tensor matmul(const Tensor & a, const Tensor & b)
{
  constexpr const char * op = "matmul";
  require_defined(op, a);
  require_defined(op, b);
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    shape_error(op, "need (m x k) * (k x n)", a, b);
  }
  const std::size_t m = a.shape()[0];
  const std::size_t k = a.shape()[1];
  const std::size_t n = b.shape()[1];
  std::vector<double> y(m * n);
  {
    const ConstMatMap am(a.values().data(), m, k);
    const ConstMatMap bm(b.values().data(), k, n);
    MatMap ym(y.data(), m, n);
    ym.noalias() = am * bm;
  }
  const bool req = tracking(a.requires_grad() || b.requires_grad());
  Tensor out = finish(op, {m, n}, std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr B = b.data();
    DataPtr Y = out.data();
    record(op, [A, B, Y, m, k, n] {
      if (Y->grad.empty()) {
        return;
      }
      const ConstMatMap gy(Y->grad.data(), m, n);
      if (A->requires_grad) {
        MatMap ga(A->grad_buffer().data(), m, k);
        ga.noalias() += gy * ConstMatMap(B->values.data(), k, n).transpose();
      }
      if (B->requires_grad) {
        MatMap gb(B->grad_buffer().data(), k, n);
        gb.noalias() += ConstMatMap(A->values.data(), m, k).transpose() * gy;
      }
    });
  }
  return out;
}

namespace
{

// Shared implementation of add/sub: sign is +1 or -1 for the second operand.
Tensor add_signed(const char * op, const Tensor & a, const Tensor & b, double sign, bool allow_bias)
{
  require_defined(op, a);
  require_defined(op, b);
  const bool same = a.shape() == b.shape();
  const bool bias = !same && allow_bias && a.rank() == 2 && b.size() == a.shape()[1] &&
                    (b.rank() == 1 || (b.rank() == 2 && b.shape()[0] == 1));
  if (!same && !bias) {
    shape_error(op, allow_bias ? "shapes must match or be (r x c) + (c)" : "shapes must match", a, b);
  }
  const auto & x = a.values();
  const auto & z = b.values();
  const std::size_t cols = bias ? b.size() : x.size();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + sign * z[i % cols];
  }
  const bool req = tracking(a.requires_grad() || b.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr B = b.data();
    DataPtr Y = out.data();
    record(op, [A, B, Y, sign, cols] {
      if (Y->grad.empty()) {
        return;
      }
      const auto & gy = Y->grad;
      if (A->requires_grad) {
        auto & ga = A->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          ga[i] += gy[i];
        }
      }
      if (B->requires_grad) {
        auto & gb = B->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          gb[i % cols] += sign * gy[i];
        }
      }
    });
  }
  return out;
}

}  // namespace

Tensor add(const Tensor & a, const Tensor & b)
{
  return add_signed("add", a, b, 1.0, true);
}

Tensor sub(const Tensor & a, const Tensor & b)
{
  return add_signed("sub", a, b, -1.0, false);
}

Tensor mul(const Tensor & a, const Tensor & b)
{
  constexpr const char * op = "mul";
  require_defined(op, a);
  require_defined(op, b);
  if (a.shape() != b.shape()) {
    shape_error(op, "shapes must match", a, b);
  }
  const auto & x = a.values();
  const auto & z = b.values();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] * z[i];
  }
  const bool req = tracking(a.requires_grad() || b.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr B = b.data();
    DataPtr Y = out.data();
    record(op, [A, B, Y] {
      if (Y->grad.empty()) {
        return;
      }
      const auto & gy = Y->grad;
      if (A->requires_grad) {
        auto & ga = A->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          ga[i] += gy[i] * B->values[i];
        }
      }
      if (B->requires_grad) {
        auto & gb = B->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          gb[i] += gy[i] * A->values[i];
        }
      }
    });
  }
  return out;
}

Tensor scale(const Tensor & a, double factor)
{
  return unary(
    "scale", a, [factor](double x) { return factor * x; },
    [factor](double, double) { return factor; });
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis)
{
  constexpr const char * op = "concat";
  if (parts.empty()) {
    shape_error(op, "no inputs");
  }
  if (axis > 1) {
    shape_error(op, "axis must be 0 or 1");
  }
  for (const auto & p : parts) {
    require_defined(op, p);
    if (p.rank() != 2) {
      shape_error(op, "inputs must be rank 2", p);
    }
  }
  const std::size_t keep = parts[0].shape()[1 - axis];
  std::size_t total = 0;
  bool req = false;
  for (const auto & p : parts) {
    if (p.shape()[1 - axis] != keep) {
      shape_error(op, "non-concatenated extents differ", parts[0], p);
    }
    total += p.shape()[axis];
    req = req || p.requires_grad();
  }
  const std::size_t rows = axis == 0 ? total : keep;
  const std::size_t cols = axis == 0 ? keep : total;
  std::vector<double> y(rows * cols);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto & p : parts) {
    offsets.push_back(offset);
    const std::size_t pr = p.shape()[0];
    const std::size_t pc = p.shape()[1];
    for (std::size_t r = 0; r < pr; ++r) {
      for (std::size_t c = 0; c < pc; ++c) {
        const std::size_t dst = axis == 0 ? (offset + r) * cols + c : r * cols + offset + c;
        y[dst] = p.values()[r * pc + c];
      }
    }
    offset += p.shape()[axis];
  }
  req = tracking(req);
  Tensor out = finish(op, {rows, cols}, std::move(y), req);
  if (req) {
    std::vector<DataPtr> inputs;
    for (const auto & p : parts) {
      inputs.push_back(p.data());
    }
    DataPtr Y = out.data();
    record(op, [inputs, offsets, Y, axis, cols] {
      if (Y->grad.empty()) {
        return;
      }
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto & in = inputs[i];
        if (!in->requires_grad) {
          continue;
        }
        auto & g = in->grad_buffer();
        const std::size_t pr = in->shape[0];
        const std::size_t pc = in->shape[1];
        for (std::size_t r = 0; r < pr; ++r) {
          for (std::size_t c = 0; c < pc; ++c) {
            const std::size_t src =
              axis == 0 ? (offsets[i] + r) * cols + c : r * cols + offsets[i] + c;
            g[r * pc + c] += Y->grad[src];
          }
        }
      }
    });
  }
  return out;
}

Tensor concat(std::initializer_list<Tensor> parts, std::size_t axis)
{
  return concat(std::span<const Tensor>(parts.begin(), parts.size()), axis);
}

Tensor slice(const Tensor & a, std::size_t axis, std::size_t begin, std::size_t end)
{
  constexpr const char * op = "slice";
  require_defined(op, a);
  if (a.rank() > 2 || axis >= a.rank()) {
    shape_error(op, "axis " + std::to_string(axis) + " invalid for rank", a);
  }
  if (begin >= end || end > a.shape()[axis]) {
    shape_error(
      op, "range [" + std::to_string(begin) + "," + std::to_string(end) + ") out of bounds", a);
  }
  const auto [rows, cols] = as_matrix(op, a);
  // Rank 1 slices its only axis, which is the column axis of the row view.
  const bool col_axis = a.rank() == 1 || axis == 1;
  const std::size_t out_rows = col_axis ? rows : end - begin;
  const std::size_t out_cols = col_axis ? end - begin : cols;
  const std::size_t r0 = col_axis ? 0 : begin;
  const std::size_t c0 = col_axis ? begin : 0;
  std::vector<double> y(out_rows * out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      y[r * out_cols + c] = a.values()[(r0 + r) * cols + c0 + c];
    }
  }
  Shape shape = a.rank() == 1 ? Shape{out_cols} : Shape{out_rows, out_cols};
  const bool req = tracking(a.requires_grad());
  Tensor out = finish(op, std::move(shape), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr Y = out.data();
    const std::size_t in_cols = cols;
    record(op, [A, Y, out_rows, out_cols, r0, c0, in_cols] {
      if (Y->grad.empty()) {
        return;
      }
      auto & ga = A->grad_buffer();
      for (std::size_t r = 0; r < out_rows; ++r) {
        for (std::size_t c = 0; c < out_cols; ++c) {
          ga[(r0 + r) * in_cols + c0 + c] += Y->grad[r * out_cols + c];
        }
      }
    });
  }
  return out;
}

Tensor transpose(const Tensor & a)
{
  constexpr const char * op = "transpose";
  require_defined(op, a);
  if (a.rank() != 2) {
    shape_error(op, "expected rank 2", a);
  }
  const std::size_t rows = a.shape()[0];
  const std::size_t cols = a.shape()[1];
  std::vector<double> y(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      y[c * rows + r] = a.values()[r * cols + c];
    }
  }
  const bool req = tracking(a.requires_grad());
  Tensor out = finish(op, {cols, rows}, std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr Y = out.data();
    record(op, [A, Y, rows, cols] {
      if (Y->grad.empty()) {
        return;
      }
      auto & ga = A->grad_buffer();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          ga[r * cols + c] += Y->grad[c * rows + r];
        }
      }
    });
  }
  return out;
}

Tensor softmax_rows(const Tensor & a)
{
  constexpr const char * op = "softmax_rows";
  const auto [rows, cols] = as_matrix(op, a);
  std::vector<double> y(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double * x = a.values().data() + r * cols;
    double * out = y.data() + r * cols;
    const double peak = *std::max_element(x, x + cols);
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      out[c] = std::exp(x[c] - peak);
      total += out[c];
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out[c] /= total;
    }
  }
  const bool req = tracking(a.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr Y = out.data();
    record(op, [A, Y, rows = rows, cols = cols] {
      if (Y->grad.empty()) {
        return;
      }
      auto & ga = A->grad_buffer();
      for (std::size_t r = 0; r < rows; ++r) {
        const double * yv = Y->values.data() + r * cols;
        const double * gy = Y->grad.data() + r * cols;
        double dot = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
          dot += gy[c] * yv[c];
        }
        for (std::size_t c = 0; c < cols; ++c) {
          ga[r * cols + c] += yv[c] * (gy[c] - dot);
        }
      }
    });
  }
  return out;
}

Tensor layernorm(const Tensor & a, const Tensor & gain, const Tensor & bias)
{
  constexpr const char * op = "layernorm";
  require_defined(op, a);
  require_defined(op, gain);
  require_defined(op, bias);
  if (a.rank() != 2) {
    shape_error(op, "expected rank 2 input", a);
  }
  const std::size_t rows = a.shape()[0];
  const std::size_t cols = a.shape()[1];
  if (gain.size() != cols || bias.size() != cols) {
    shape_error(op, "gain/bias must have one entry per column", gain, bias);
  }
  std::vector<double> y(rows * cols);
  std::vector<double> xhat(rows * cols);
  std::vector<double> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double * x = a.values().data() + r * cols;
    double mu = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      mu += x[c];
    }
    mu /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      var += (x[c] - mu) * (x[c] - mu);
    }
    var /= static_cast<double>(cols);
    inv_std[r] = 1.0 / std::sqrt(var + kLayerNormEps);
    for (std::size_t c = 0; c < cols; ++c) {
      const double h = (x[c] - mu) * inv_std[r];
      xhat[r * cols + c] = h;
      y[r * cols + c] = gain.values()[c] * h + bias.values()[c];
    }
  }
  const bool req = tracking(a.requires_grad() || gain.requires_grad() || bias.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr G = gain.data();
    DataPtr B = bias.data();
    DataPtr Y = out.data();
    record(op, [A, G, B, Y, xhat = std::move(xhat), inv_std = std::move(inv_std), rows, cols] {
      if (Y->grad.empty()) {
        return;
      }
      const auto & gy = Y->grad;
      if (G->requires_grad) {
        auto & gg = G->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          gg[i % cols] += gy[i] * xhat[i];
        }
      }
      if (B->requires_grad) {
        auto & gb = B->grad_buffer();
        for (std::size_t i = 0; i < gy.size(); ++i) {
          gb[i % cols] += gy[i];
        }
      }
      if (A->requires_grad) {
        auto & ga = A->grad_buffer();
        const double n = static_cast<double>(cols);
        for (std::size_t r = 0; r < rows; ++r) {
          double mean_d = 0.0;
          double mean_dx = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            const double d = gy[r * cols + c] * G->values[c];
            mean_d += d;
            mean_dx += d * xhat[r * cols + c];
          }
          mean_d /= n;
          mean_dx /= n;
          for (std::size_t c = 0; c < cols; ++c) {
            const double d = gy[r * cols + c] * G->values[c];
            ga[r * cols + c] += inv_std[r] * (d - mean_d - xhat[r * cols + c] * mean_dx);
          }
        }
      }
    });
  }
  return out;
}

Tensor relu(const Tensor & a)
{
  return unary(
    "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
    [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor & a)
{
  return unary(
    "tanh", a, [](double x) { return std::tanh(x); },
    [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor & a)
{
  return unary(
    "sigmoid", a,
    [](double x) {
      if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
      }
      const double e = std::exp(x);
      return e / (1.0 + e);
    },
    [](double, double y) { return y * (1.0 - y); });
}

Tensor abs(const Tensor & a)
{
  return unary(
    "abs", a, [](double x) { return std::abs(x); },
    [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor max2(const Tensor & a, const Tensor & b)
{
  constexpr const char * op = "max2";
  require_defined(op, a);
  require_defined(op, b);
  if (a.shape() != b.shape()) {
    shape_error(op, "shapes must match", a, b);
  }
  const auto & x = a.values();
  const auto & z = b.values();
  std::vector<double> y(x.size());
  std::vector<bool> first(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    first[i] = x[i] >= z[i];
    y[i] = first[i] ? x[i] : z[i];
  }
  const bool req = tracking(a.requires_grad() || b.requires_grad());
  Tensor out = finish(op, a.shape(), std::move(y), req);
  if (req) {
    DataPtr A = a.data();
    DataPtr B = b.data();
    DataPtr Y = out.data();
    record(op, [A, B, Y, first = std::move(first)] {
      if (Y->grad.empty()) {
        return;
      }
      for (std::size_t i = 0; i < first.size(); ++i) {
        auto & target = first[i] ? *A : *B;
        if (target.requires_grad) {
          target.grad_buffer()[i] += Y->grad[i];
        }
      }
    });
  }
  return out;
}

namespace
{

Tensor reduce(const char * op, const Tensor & a, double weight)
{
  require_defined(op, a);
  double total = 0.0;
  for (const double v : a.values()) {
    total += v;
  }
  const bool req = tracking(a.requires_grad());
  Tensor out = finish(op, {1}, {weight * total}, req);
  if (req) {
    DataPtr A = a.data();
    DataPtr Y = out.data();
    record(op, [A, Y, weight] {
      if (Y->grad.empty()) {
        return;
      }
      const double g = weight * Y->grad[0];
      for (auto & v : A->grad_buffer()) {
        v += g;
      }
    });
  }
  return out;
}

}  // namespace

Tensor sum(const Tensor & a)
{
  return reduce("sum", a, 1.0);
}

Tensor mean(const Tensor & a)
{
  require_defined("mean", a);
  return reduce("mean", a, 1.0 / static_cast<double>(a.size()));
}

Tensor conv1d(const Tensor & x, const Tensor & weight, std::size_t kernel)
{
  constexpr const char * op = "conv1d";
  require_defined(op, x);
  require_defined(op, weight);
  if (kernel == 0 || kernel % 2 == 0) {
    shape_error(op, "kernel must be odd, got " + std::to_string(kernel));
  }
  if (x.rank() != 2 || weight.rank() != 2 || weight.shape()[0] != kernel * x.shape()[1]) {
    shape_error(op, "need x (T x c_in) and weight (kernel*c_in x c_out)", x, weight);
  }
  const std::size_t steps = x.shape()[0];
  const std::size_t c_in = x.shape()[1];
  const std::size_t c_out = weight.shape()[1];
  const std::size_t width = kernel * c_in;
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(kernel / 2);

  // im2col: patches (T x kernel*c_in), zero rows outside the sequence.
  std::vector<double> patches(steps * width, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < kernel; ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - pad;
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) {
        continue;
      }
      for (std::size_t c = 0; c < c_in; ++c) {
        patches[t * width + k * c_in + c] = x.values()[static_cast<std::size_t>(src) * c_in + c];
      }
    }
  }
  std::vector<double> y(steps * c_out);
  MatMap(y.data(), steps, c_out).noalias() =
    ConstMatMap(patches.data(), steps, width) * ConstMatMap(weight.values().data(), width, c_out);

  const bool req = tracking(x.requires_grad() || weight.requires_grad());
  Tensor out = finish(op, {steps, c_out}, std::move(y), req);
  if (req) {
    DataPtr X = x.data();
    DataPtr W = weight.data();
    DataPtr Y = out.data();
    record(
      op, [X, W, Y, patches = std::move(patches), steps, c_in, c_out, width, kernel, pad] {
        if (Y->grad.empty()) {
          return;
        }
        const ConstMatMap gy(Y->grad.data(), steps, c_out);
        if (W->requires_grad) {
          MatMap(W->grad_buffer().data(), width, c_out).noalias() +=
            ConstMatMap(patches.data(), steps, width).transpose() * gy;
        }
        if (X->requires_grad) {
          RowMat gp = gy * ConstMatMap(W->values.data(), width, c_out).transpose();
          auto & gx = X->grad_buffer();
          for (std::size_t t = 0; t < steps; ++t) {
            for (std::size_t k = 0; k < kernel; ++k) {
              const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - pad;
              if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) {
                continue;
              }
              for (std::size_t c = 0; c < c_in; ++c) {
                gx[static_cast<std::size_t>(src) * c_in + c] += gp(t, k * c_in + c);
              }
            }
          }
        }
      });
  }
  return out;
}

Tensor maxpool_time(const Tensor & x)
{
  constexpr const char * op = "maxpool_time";
  require_defined(op, x);
  if (x.rank() != 2) {
    shape_error(op, "expected (T x c)", x);
  }
  const std::size_t steps = x.shape()[0];
  const std::size_t channels = x.shape()[1];
  std::vector<double> y(channels);
  std::vector<std::size_t> arg(channels, 0);
  for (std::size_t c = 0; c < channels; ++c) {
    double best = x.values()[c];
    for (std::size_t t = 1; t < steps; ++t) {
      const double v = x.values()[t * channels + c];
      if (v > best) {
        best = v;
        arg[c] = t;
      }
    }
    y[c] = best;
  }
  const bool req = tracking(x.requires_grad());
  Tensor out = finish(op, {1, channels}, std::move(y), req);
  if (req) {
    DataPtr X = x.data();
    DataPtr Y = out.data();
    record(op, [X, Y, arg = std::move(arg), channels] {
      if (Y->grad.empty()) {
        return;
      }
      auto & gx = X->grad_buffer();
      for (std::size_t c = 0; c < channels; ++c) {
        gx[arg[c] * channels + c] += Y->grad[c];
      }
    });
  }
  return out;
}

Tensor embed_lookup(const Tensor & table, std::size_t index)
{
  constexpr const char * op = "embed_lookup";
  require_defined(op, table);
  if (table.rank() != 2) {
    shape_error(op, "table must be rank 2", table);
  }
  if (index >= table.shape()[0]) {
    shape_error(op, "index " + std::to_string(index) + " out of range", table);
  }
  const std::size_t cols = table.shape()[1];
  const auto row = table.values().subspan(index * cols, cols);
  const bool req = tracking(table.requires_grad());
  Tensor out = finish(op, {1, cols}, std::vector<double>(row.begin(), row.end()), req);
  if (req) {
    DataPtr T = table.data();
    DataPtr Y = out.data();
    record(op, [T, Y, index, cols] {
      if (Y->grad.empty()) {
        return;
      }
      auto & gt = T->grad_buffer();
      for (std::size_t c = 0; c < cols; ++c) {
        gt[index * cols + c] += Y->grad[c];
      }
    });
  }
  return out;
}

}  // namespace rfsdrive::ad
