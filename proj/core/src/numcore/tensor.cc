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

#include "reflm/numcore/tensor.h"

#include <sstream>
#include <unordered_set>

namespace reflm {
namespace {

thread_local Tape* g_active_tape = nullptr;

}  // namespace

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ",";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  const std::size_t n = shape_size(shape);
  return from(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> data,
                    bool requires_grad) {
  if (shape.empty()) throw ShapeError("tensor shape must have rank >= 1");
  for (std::size_t d : shape) {
    if (d == 0) {
      throw ShapeError("tensor dimensions must be positive, got " +
                       shape_string(shape));
    }
  }
  if (shape_size(shape) != data.size()) {
    throw ShapeError("tensor data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_string(shape));
  }
  auto node = std::make_shared<TensorNode>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::vector(std::vector<double> data, bool requires_grad) {
  Shape shape{data.size()};
  return from(std::move(shape), std::move(data), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item() on non-scalar tensor of shape " +
                     shape_string(shape()));
  }
  return node_->data[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty()) return std::vector<double>(size(), 0.0);
  return node_->grad;
}

std::span<double> Tensor::mutable_grad() {
  if (node_->grad.empty()) node_->grad.assign(size(), 0.0);
  return node_->grad;
}

void Tensor::zero_grad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::clone() const {
  Tensor copy = from(shape(), node_->data, node_->requires_grad);
  copy.node_->grad = node_->grad;
  return copy;
}

Tensor Tensor::detach() const { return from(shape(), node_->data, false); }

const char* primitive_name(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::kMatVec: return "matvec";
    case PrimitiveKind::kMatMul: return "matmul";
    case PrimitiveKind::kTranspose: return "transpose";
    case PrimitiveKind::kAdd: return "add";
    case PrimitiveKind::kSub: return "sub";
    case PrimitiveKind::kMul: return "mul";
    case PrimitiveKind::kScale: return "scale";
    case PrimitiveKind::kAddRows: return "add_rows";
    case PrimitiveKind::kConcat: return "concat";
    case PrimitiveKind::kStack: return "stack";
    case PrimitiveKind::kTanh: return "tanh";
    case PrimitiveKind::kSigmoid: return "sigmoid";
    case PrimitiveKind::kLogSigmoid: return "log_sigmoid";
    case PrimitiveKind::kSoftmax: return "softmax";
    case PrimitiveKind::kLogSoftmax: return "log_softmax";
    case PrimitiveKind::kLog: return "log";
    case PrimitiveKind::kExp: return "exp";
    case PrimitiveKind::kSum: return "sum";
    case PrimitiveKind::kWeightedSum: return "weighted_sum";
    case PrimitiveKind::kOuter: return "outer_product";
    case PrimitiveKind::kEmbeddingLookup: return "embedding_lookup";
    case PrimitiveKind::kSelect: return "select";
    case PrimitiveKind::kGatherSum: return "gather_sum";
    case PrimitiveKind::kGatherRows: return "gather_rows";
    case PrimitiveKind::kLogSumExp: return "logsumexp";
    case PrimitiveKind::kCustom: return "custom";
  }
  return "unknown";
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw std::invalid_argument(
        "backward requires a scalar loss, got shape " +
        (loss.defined() ? shape_string(loss.shape()) : std::string("<none>")));
  }
  if (!loss.requires_grad()) {
    throw std::invalid_argument(
        "backward: loss was not produced under an active record from "
        "parameters that require grad");
  }

  std::unordered_set<const TensorNode*> intermediates;
  intermediates.reserve(records_.size());
  for (PrimitiveRecord& rec : records_) {
    rec.output.node()->grad.clear();
    intermediates.insert(rec.output.node());
  }

  Tensor seed = loss;
  if (intermediates.count(loss.node()) != 0) {
    seed.mutable_grad()[0] = 1.0;
  } else {
    seed.mutable_grad()[0] += 1.0;
    return;
  }

  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->output.node()->grad.empty()) continue;
    it->adjoint(*it);
  }
}

TapeScope::TapeScope(Tape& tape) : previous_(g_active_tape) {
  g_active_tape = &tape;
}

TapeScope::~TapeScope() { g_active_tape = previous_; }

NoRecordScope::NoRecordScope() : previous_(g_active_tape) {
  g_active_tape = nullptr;
}

NoRecordScope::~NoRecordScope() { g_active_tape = previous_; }

Tape* active_tape() { return g_active_tape; }

void backward(const Tensor& loss) {
  Tape* tape = active_tape();
  if (tape == nullptr) {
    throw std::invalid_argument("backward called without an active record");
  }
  tape->backward(loss);
}

Tensor make_result(PrimitiveKind kind, std::vector<Tensor> inputs,
                   Shape shape, std::vector<double> data,
                   std::function<void(const PrimitiveRecord&)> adjoint) {
  Tensor out = Tensor::from(std::move(shape), std::move(data));
  Tape* tape = active_tape();
  if (tape == nullptr) return out;
  bool needs = false;
  for (const Tensor& in : inputs) needs = needs || in.requires_grad();
  if (!needs) return out;
  out.set_requires_grad(true);
  tape->record(PrimitiveRecord{kind, std::move(inputs), out, std::move(adjoint)});
  return out;
}

}  // namespace reflm
