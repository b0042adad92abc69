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

#ifndef REFLM_NUMCORE_TENSOR_H_
#define REFLM_NUMCORE_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reflm {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Raised for any input that does not conform to a primitive's signature.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Storage behind a Tensor handle. Gradients are allocated lazily; an empty
// grad buffer means "no adjoint has reached this node yet".
struct TensorNode {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;
  bool requires_grad = false;
};

// Shared handle to a dense row-major array of doubles. Copies alias the same
// storage; use clone() for a deep copy. Scalars have shape {1}.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> data,
                     bool requires_grad = false);
  static Tensor vector(std::vector<double> data, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->data.size(); }
  std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }

  std::span<const double> data() const { return node_->data; }
  std::span<double> mutable_data() { return node_->data; }
  double operator[](std::size_t i) const { return node_->data[i]; }
  // Value of a single-element tensor.
  double item() const;
  std::vector<double> to_vector() const { return node_->data; }

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool value) { node_->requires_grad = value; }

  bool has_grad() const { return !node_->grad.empty(); }
  // Zero-filled view if no gradient has been accumulated.
  std::vector<double> grad() const;
  // Allocates (zeroed) on first use.
  std::span<double> mutable_grad();
  void zero_grad();

  Tensor clone() const;
  // Copy of the values with gradient tracking disabled.
  Tensor detach() const;

  TensorNode* node() const { return node_.get(); }
  const std::shared_ptr<TensorNode>& shared_node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<TensorNode> node) : node_(std::move(node)) {}
  std::shared_ptr<TensorNode> node_;
};

enum class PrimitiveKind {
  kMatVec,
  kMatMul,
  kTranspose,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddRows,
  kConcat,
  kStack,
  kTanh,
  kSigmoid,
  kLogSigmoid,
  kSoftmax,
  kLogSoftmax,
  kLog,
  kExp,
  kSum,
  kWeightedSum,
  kOuter,
  kEmbeddingLookup,
  kSelect,
  kGatherSum,
  kGatherRows,
  kLogSumExp,
  kCustom,
};

const char* primitive_name(PrimitiveKind kind);

// One applied primitive. The adjoint callback reads output.grad and
// accumulates into the grads of inputs that require them.
struct PrimitiveRecord {
  PrimitiveKind kind;
  std::vector<Tensor> inputs;
  Tensor output;
  std::function<void(const PrimitiveRecord&)> adjoint;
};

// Ordered log of primitives applied while it is active. Replaying the
// adjoints in reverse order yields reverse-mode gradients.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void record(PrimitiveRecord rec) { records_.push_back(std::move(rec)); }
  std::size_t size() const { return records_.size(); }
  const std::vector<PrimitiveRecord>& records() const { return records_; }

  // Drops every record, releasing all intermediates they kept alive.
  void clear() { records_.clear(); }

  // Accumulates d(loss)/d(leaf) into every leaf that requires grad.
  // Intermediate adjoints are reset first, so calling backward repeatedly
  // on the same record adds leaf gradients linearly.
  void backward(const Tensor& loss);

 private:
  std::vector<PrimitiveRecord> records_;
};

// Installs a tape as the thread's active record for the scope's lifetime.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

// Temporarily disables recording on this thread.
class NoRecordScope {
 public:
  NoRecordScope();
  ~NoRecordScope();
  NoRecordScope(const NoRecordScope&) = delete;
  NoRecordScope& operator=(const NoRecordScope&) = delete;

 private:
  Tape* previous_;
};

Tape* active_tape();

// backward() against the active tape.
void backward(const Tensor& loss);

// Builds the output of a primitive and, if recording is active and any input
// requires grad, appends it to the tape. Exposed so callers can register
// their own differentiable operations.
Tensor make_result(PrimitiveKind kind, std::vector<Tensor> inputs,
                   Shape shape, std::vector<double> data,
                   std::function<void(const PrimitiveRecord&)> adjoint);

}  // namespace reflm

#endif  // REFLM_NUMCORE_TENSOR_H_
