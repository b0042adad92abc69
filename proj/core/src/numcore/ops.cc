// Copyright 2026 The reflm Authors.
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

#include "reflm/numcore/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reflm {
namespace {

using Record = PrimitiveRecord;

[[noreturn]] void fail(PrimitiveKind kind, const std::string& what) {
  throw ShapeError(std::string(primitive_name(kind)) + ": " + what);
}

void require_rank(PrimitiveKind kind, const Tensor& t, std::size_t rank,
                  const char* role) {
  if (!t.defined()) fail(kind, std::string(role) + " is undefined");
  if (t.rank() != rank) {
    fail(kind, std::string(role) + " must have rank " + std::to_string(rank) +
                   ", got " + shape_string(t.shape()));
  }
}

void require_same_shape(PrimitiveKind kind, const Tensor& a, const Tensor& b) {
  if (!a.defined() || !b.defined()) fail(kind, "undefined operand");
  if (a.shape() != b.shape()) {
    fail(kind, "shape mismatch " + shape_string(a.shape()) + " vs " +
                   shape_string(b.shape()));
  }
}

// Grad buffer of input i when it participates in differentiation.
double* in_grad(const Record& rec, std::size_t i) {
  Tensor in = rec.inputs[i];
  if (!in.requires_grad()) return nullptr;
  return in.mutable_grad().data();
}

const double* out_grad(const Record& rec) {
  return rec.output.node()->grad.data();
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

Tensor elementwise(PrimitiveKind kind, const Tensor& a,
                   double (*value)(double),
                   double (*derivative)(double in, double out)) {
  if (!a.defined()) fail(kind, "undefined operand");
  std::vector<double> out(a.size());
  auto in = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(in[i]);
  return make_result(kind, {a}, a.shape(), std::move(out),
                     [derivative](const Record& rec) {
                       double* ga = in_grad(rec, 0);
                       if (ga == nullptr) return;
                       const double* g = out_grad(rec);
                       auto x = rec.inputs[0].data();
                       auto y = rec.output.data();
                       for (std::size_t i = 0; i < x.size(); ++i) {
                         ga[i] += g[i] * derivative(x[i], y[i]);
                       }
                     });
}

}  // namespace

Tensor matvec(const Tensor& a, const Tensor& x) {
  constexpr auto kind = PrimitiveKind::kMatVec;
  require_rank(kind, a, 2, "matrix");
  require_rank(kind, x, 1, "vector");
  const std::size_t m = a.dim(0), n = a.dim(1);
  if (x.dim(0) != n) {
    fail(kind, "shape mismatch " + shape_string(a.shape()) + " x " +
                   shape_string(x.shape()));
  }
  std::vector<double> out(m, 0.0);
  auto ad = a.data();
  auto xd = x.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = ad.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * xd[j];
    out[i] = acc;
  }
  return make_result(kind, {a, x}, {m}, std::move(out), [m, n](const Record& rec) {
    const double* g = out_grad(rec);
    auto ad = rec.inputs[0].data();
    auto xd = rec.inputs[1].data();
    if (double* ga = in_grad(rec, 0)) {
      for (std::size_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        double* row = ga + i * n;
        for (std::size_t j = 0; j < n; ++j) row[j] += gi * xd[j];
      }
    }
    if (double* gx = in_grad(rec, 1)) {
      for (std::size_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        const double* row = ad.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) gx[j] += gi * row[j];
      }
    }
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  constexpr auto kind = PrimitiveKind::kMatMul;
  require_rank(kind, a, 2, "lhs");
  require_rank(kind, b, 2, "rhs");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    fail(kind, "shape mismatch " + shape_string(a.shape()) + " x " +
                   shape_string(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ad[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = bd.data() + p * n;
      double* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_result(kind, {a, b}, {m, n}, std::move(out),
                     [m, k, n](const Record& rec) {
                       const double* g = out_grad(rec);
                       auto ad = rec.inputs[0].data();
                       auto bd = rec.inputs[1].data();
                       if (double* ga = in_grad(rec, 0)) {
                         // dA = G * B^T
                         for (std::size_t i = 0; i < m; ++i) {
                           for (std::size_t p = 0; p < k; ++p) {
                             double acc = 0.0;
                             for (std::size_t j = 0; j < n; ++j) {
                               acc += g[i * n + j] * bd[p * n + j];
                             }
                             ga[i * k + p] += acc;
                           }
                         }
                       }
                       if (double* gb = in_grad(rec, 1)) {
                         // dB = A^T * G
                         for (std::size_t i = 0; i < m; ++i) {
                           for (std::size_t p = 0; p < k; ++p) {
                             const double aip = ad[i * k + p];
                             if (aip == 0.0) continue;
                             for (std::size_t j = 0; j < n; ++j) {
                               gb[p * n + j] += aip * g[i * n + j];
                             }
                           }
                         }
                       }
                     });
}

Tensor transpose(const Tensor& a) {
  constexpr auto kind = PrimitiveKind::kTranspose;
  require_rank(kind, a, 2, "matrix");
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  auto ad = a.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = ad[i * n + j];
  }
  return make_result(kind, {a}, {n, m}, std::move(out), [m, n](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double* g = out_grad(rec);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  constexpr auto kind = PrimitiveKind::kAdd;
  require_same_shape(kind, a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return make_result(kind, {a, b}, a.shape(), std::move(out), [](const Record& rec) {
    const double* g = out_grad(rec);
    const std::size_t n = rec.output.size();
    for (std::size_t k = 0; k < 2; ++k) {
      if (double* gi = in_grad(rec, k)) {
        for (std::size_t i = 0; i < n; ++i) gi[i] += g[i];
      }
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  constexpr auto kind = PrimitiveKind::kSub;
  require_same_shape(kind, a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return make_result(kind, {a, b}, a.shape(), std::move(out), [](const Record& rec) {
    const double* g = out_grad(rec);
    const std::size_t n = rec.output.size();
    if (double* ga = in_grad(rec, 0)) {
      for (std::size_t i = 0; i < n; ++i) ga[i] += g[i];
    }
    if (double* gb = in_grad(rec, 1)) {
      for (std::size_t i = 0; i < n; ++i) gb[i] -= g[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  constexpr auto kind = PrimitiveKind::kMul;
  require_same_shape(kind, a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return make_result(kind, {a, b}, a.shape(), std::move(out), [](const Record& rec) {
    const double* g = out_grad(rec);
    auto ad = rec.inputs[0].data();
    auto bd = rec.inputs[1].data();
    if (double* ga = in_grad(rec, 0)) {
      for (std::size_t i = 0; i < ad.size(); ++i) ga[i] += g[i] * bd[i];
    }
    if (double* gb = in_grad(rec, 1)) {
      for (std::size_t i = 0; i < ad.size(); ++i) gb[i] += g[i] * ad[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  constexpr auto kind = PrimitiveKind::kScale;
  if (!a.defined()) fail(kind, "undefined operand");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * factor;
  return make_result(kind, {a}, a.shape(), std::move(out),
                     [factor](const Record& rec) {
                       double* ga = in_grad(rec, 0);
                       if (ga == nullptr) return;
                       const double* g = out_grad(rec);
                       for (std::size_t i = 0; i < rec.output.size(); ++i) {
                         ga[i] += g[i] * factor;
                       }
                     });
}

Tensor add_rows(const Tensor& a, const Tensor& row) {
  constexpr auto kind = PrimitiveKind::kAddRows;
  require_rank(kind, a, 2, "matrix");
  require_rank(kind, row, 1, "row");
  const std::size_t m = a.dim(0), n = a.dim(1);
  if (row.dim(0) != n) {
    fail(kind, "shape mismatch " + shape_string(a.shape()) + " + " +
                   shape_string(row.shape()));
  }
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a[i * n + j] + row[j];
  }
  return make_result(kind, {a, row}, {m, n}, std::move(out),
                     [m, n](const Record& rec) {
                       const double* g = out_grad(rec);
                       if (double* ga = in_grad(rec, 0)) {
                         for (std::size_t i = 0; i < m * n; ++i) ga[i] += g[i];
                       }
                       if (double* gr = in_grad(rec, 1)) {
                         for (std::size_t i = 0; i < m; ++i) {
                           for (std::size_t j = 0; j < n; ++j) gr[j] += g[i * n + j];
                         }
                       }
                     });
}

Tensor concat(std::span<const Tensor> parts) {
  constexpr auto kind = PrimitiveKind::kConcat;
  if (parts.empty()) fail(kind, "no operands");
  std::vector<double> out;
  std::vector<Tensor> inputs;
  inputs.reserve(parts.size());
  for (const Tensor& p : parts) {
    require_rank(kind, p, 1, "operand");
    auto d = p.data();
    out.insert(out.end(), d.begin(), d.end());
    inputs.push_back(p);
  }
  const std::size_t n = out.size();
  return make_result(kind, std::move(inputs), {n}, std::move(out), [](const Record& rec) {
    const double* g = out_grad(rec);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < rec.inputs.size(); ++k) {
      const std::size_t len = rec.inputs[k].size();
      if (double* gi = in_grad(rec, k)) {
        for (std::size_t i = 0; i < len; ++i) gi[i] += g[offset + i];
      }
      offset += len;
    }
  });
}

Tensor concat(std::initializer_list<Tensor> parts) {
  return concat(std::span<const Tensor>(parts.begin(), parts.size()));
}

Tensor stack(std::span<const Tensor> rows) {
  constexpr auto kind = PrimitiveKind::kStack;
  if (rows.empty()) fail(kind, "no rows");
  require_rank(kind, rows[0], 1, "row");
  const std::size_t d = rows[0].dim(0);
  std::vector<double> out;
  out.reserve(rows.size() * d);
  std::vector<Tensor> inputs;
  inputs.reserve(rows.size());
  for (const Tensor& r : rows) {
    require_rank(kind, r, 1, "row");
    if (r.dim(0) != d) {
      fail(kind, "row shape mismatch " + shape_string(rows[0].shape()) + " vs " +
                     shape_string(r.shape()));
    }
    auto v = r.data();
    out.insert(out.end(), v.begin(), v.end());
    inputs.push_back(r);
  }
  const std::size_t k = rows.size();
  return make_result(kind, std::move(inputs), {k, d}, std::move(out),
                     [d](const Record& rec) {
                       const double* g = out_grad(rec);
                       for (std::size_t r = 0; r < rec.inputs.size(); ++r) {
                         if (double* gr = in_grad(rec, r)) {
                           for (std::size_t j = 0; j < d; ++j) gr[j] += g[r * d + j];
                         }
                       }
                     });
}

Tensor tanh(const Tensor& a) {
  return elementwise(
      PrimitiveKind::kTanh, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return elementwise(
      PrimitiveKind::kSigmoid, a, stable_sigmoid,
      [](double, double y) { return y * (1.0 - y); });
}

Tensor log_sigmoid(const Tensor& a) {
  return elementwise(
      PrimitiveKind::kLogSigmoid, a, stable_log_sigmoid,
      [](double x, double) { return stable_sigmoid(-x); });
}

Tensor exp(const Tensor& a) {
  return elementwise(
      PrimitiveKind::kExp, a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor softmax(const Tensor& a) {
  constexpr auto kind = PrimitiveKind::kSoftmax;
  require_rank(kind, a, 1, "operand");
  const std::size_t n = a.size();
  auto x = a.data();
  const double mx = *std::max_element(x.begin(), x.end());
  std::vector<double> out(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(x[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return make_result(kind, {a}, {n}, std::move(out), [n](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double* g = out_grad(rec);
    auto y = rec.output.data();
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += g[i] * y[i];
    for (std::size_t i = 0; i < n; ++i) ga[i] += y[i] * (g[i] - dot);
  });
}

Tensor log_softmax(const Tensor& a) {
  constexpr auto kind = PrimitiveKind::kLogSoftmax;
  require_rank(kind, a, 1, "operand");
  const std::size_t n = a.size();
  auto x = a.data();
  const double mx = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::exp(x[i] - mx);
  const double lse = mx + std::log(total);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - lse;
  return make_result(kind, {a}, {n}, std::move(out), [n](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double* g = out_grad(rec);
    auto y = rec.output.data();
    double gsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) gsum += g[i];
    for (std::size_t i = 0; i < n; ++i) ga[i] += g[i] - std::exp(y[i]) * gsum;
  });
}

Tensor log(const Tensor& a, double floor) {
  constexpr auto kind = PrimitiveKind::kLog;
  if (!a.defined()) fail(kind, "undefined operand");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::log(std::max(a[i], floor));
  }
  return make_result(kind, {a}, a.shape(), std::move(out), [floor](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double* g = out_grad(rec);
    auto x = rec.inputs[0].data();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > floor) ga[i] += g[i] / x[i];
    }
  });
}

Tensor sum(const Tensor& a) {
  constexpr auto kind = PrimitiveKind::kSum;
  if (!a.defined()) fail(kind, "undefined operand");
  double total = 0.0;
  for (double v : a.data()) total += v;
  return make_result(kind, {a}, {1}, {total}, [](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double g = out_grad(rec)[0];
    for (std::size_t i = 0; i < rec.inputs[0].size(); ++i) ga[i] += g;
  });
}

Tensor weighted_sum(const Tensor& weights, const Tensor& rows) {
  constexpr auto kind = PrimitiveKind::kWeightedSum;
  require_rank(kind, weights, 1, "weights");
  require_rank(kind, rows, 2, "rows");
  const std::size_t k = rows.dim(0), d = rows.dim(1);
  if (weights.dim(0) != k) {
    fail(kind, "shape mismatch " + shape_string(weights.shape()) + " . " +
                   shape_string(rows.shape()));
  }
  std::vector<double> out(d, 0.0);
  auto rd = rows.data();
  for (std::size_t r = 0; r < k; ++r) {
    const double w = weights[r];
    for (std::size_t j = 0; j < d; ++j) out[j] += w * rd[r * d + j];
  }
  return make_result(kind, {weights, rows}, {d}, std::move(out),
                     [k, d](const Record& rec) {
                       const double* g = out_grad(rec);
                       auto wd = rec.inputs[0].data();
                       auto rd = rec.inputs[1].data();
                       if (double* gw = in_grad(rec, 0)) {
                         for (std::size_t r = 0; r < k; ++r) {
                           double acc = 0.0;
                           for (std::size_t j = 0; j < d; ++j) acc += g[j] * rd[r * d + j];
                           gw[r] += acc;
                         }
                       }
                       if (double* gr = in_grad(rec, 1)) {
                         for (std::size_t r = 0; r < k; ++r) {
                           for (std::size_t j = 0; j < d; ++j) gr[r * d + j] += wd[r] * g[j];
                         }
                       }
                     });
}

Tensor outer_product(const Tensor& p, const Tensor& q) {
  constexpr auto kind = PrimitiveKind::kOuter;
  require_rank(kind, p, 1, "lhs");
  require_rank(kind, q, 1, "rhs");
  const std::size_t r = p.dim(0), c = q.dim(0);
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = p[i] * q[j];
  }
  return make_result(kind, {p, q}, {r, c}, std::move(out), [r, c](const Record& rec) {
    const double* g = out_grad(rec);
    auto pd = rec.inputs[0].data();
    auto qd = rec.inputs[1].data();
    if (double* gp = in_grad(rec, 0)) {
      for (std::size_t i = 0; i < r; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < c; ++j) acc += g[i * c + j] * qd[j];
        gp[i] += acc;
      }
    }
    if (double* gq = in_grad(rec, 1)) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) gq[j] += g[i * c + j] * pd[i];
      }
    }
  });
}

Tensor embedding_lookup(const Tensor& table, std::size_t id) {
  constexpr auto kind = PrimitiveKind::kEmbeddingLookup;
  require_rank(kind, table, 2, "table");
  const std::size_t v = table.dim(0), d = table.dim(1);
  if (id >= v) {
    fail(kind, "id " + std::to_string(id) + " out of range for table " +
                   shape_string(table.shape()));
  }
  auto td = table.data();
  std::vector<double> out(td.begin() + id * d, td.begin() + (id + 1) * d);
  return make_result(kind, {table}, {d}, std::move(out), [id, d](const Record& rec) {
    double* gt = in_grad(rec, 0);
    if (gt == nullptr) return;
    const double* g = out_grad(rec);
    for (std::size_t j = 0; j < d; ++j) gt[id * d + j] += g[j];
  });
}

Tensor select(const Tensor& a, std::size_t index) {
  constexpr auto kind = PrimitiveKind::kSelect;
  if (!a.defined()) fail(kind, "undefined operand");
  if (index >= a.size()) {
    fail(kind, "index " + std::to_string(index) + " out of range for " +
                   shape_string(a.shape()));
  }
  return make_result(kind, {a}, {1}, {a[index]}, [index](const Record& rec) {
    if (double* ga = in_grad(rec, 0)) ga[index] += out_grad(rec)[0];
  });
}

Tensor gather_sum(const Tensor& a, std::span<const std::size_t> indices) {
  constexpr auto kind = PrimitiveKind::kGatherSum;
  if (!a.defined()) fail(kind, "undefined operand");
  double total = 0.0;
  for (std::size_t idx : indices) {
    if (idx >= a.size()) {
      fail(kind, "index " + std::to_string(idx) + " out of range for " +
                     shape_string(a.shape()));
    }
    total += a[idx];
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_result(kind, {a}, {1}, {total}, [idx = std::move(idx)](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double g = out_grad(rec)[0];
    for (std::size_t i : idx) ga[i] += g;
  });
}

Tensor gather_rows(const Tensor& a, std::span<const std::size_t> indices) {
  constexpr auto kind = PrimitiveKind::kGatherRows;
  require_rank(kind, a, 2, "matrix");
  if (indices.empty()) fail(kind, "empty row selection");
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out;
  out.reserve(indices.size() * n);
  auto ad = a.data();
  for (std::size_t r : indices) {
    if (r >= m) {
      fail(kind, "row " + std::to_string(r) + " out of range for " +
                     shape_string(a.shape()));
    }
    out.insert(out.end(), ad.begin() + r * n, ad.begin() + (r + 1) * n);
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  const std::size_t k = idx.size();
  return make_result(kind, {a}, {k, n}, std::move(out),
                     [idx = std::move(idx), n](const Record& rec) {
                       double* ga = in_grad(rec, 0);
                       if (ga == nullptr) return;
                       const double* g = out_grad(rec);
                       for (std::size_t i = 0; i < idx.size(); ++i) {
                         for (std::size_t j = 0; j < n; ++j) {
                           ga[idx[i] * n + j] += g[i * n + j];
                         }
                       }
                     });
}

Tensor logsumexp(const Tensor& a) {
  constexpr auto kind = PrimitiveKind::kLogSumExp;
  if (!a.defined()) fail(kind, "undefined operand");
  auto x = a.data();
  const double mx = *std::max_element(x.begin(), x.end());
  double value;
  if (mx == -std::numeric_limits<double>::infinity()) {
    value = mx;
  } else {
    double total = 0.0;
    for (double v : x) total += std::exp(v - mx);
    value = mx + std::log(total);
  }
  return make_result(kind, {a}, {1}, {value}, [](const Record& rec) {
    double* ga = in_grad(rec, 0);
    if (ga == nullptr) return;
    const double g = out_grad(rec)[0];
    const double lse = rec.output[0];
    if (!std::isfinite(lse)) return;
    auto xs = rec.inputs[0].data();
    for (std::size_t i = 0; i < xs.size(); ++i) ga[i] += g * std::exp(xs[i] - lse);
  });
}

}  // namespace reflm
