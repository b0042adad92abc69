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

#ifndef REFLM_NUMCORE_OPS_H_
#define REFLM_NUMCORE_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "reflm/numcore/tensor.h"

// Differentiable primitives. Every function validates shapes and throws
// ShapeError naming the primitive and the offending shapes. Vectors are
// rank-1, matrices rank-2, scalars have shape {1}.
namespace reflm {

// [m,n] x [n] -> [m]
Tensor matvec(const Tensor& a, const Tensor& x);
// [m,k] x [k,n] -> [m,n]
Tensor matmul(const Tensor& a, const Tensor& b);
// [m,n] -> [n,m]
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
// [m,n] + [n] broadcast over rows.
Tensor add_rows(const Tensor& a, const Tensor& row);

// Concatenates rank-1 tensors.
Tensor concat(std::span<const Tensor> parts);
Tensor concat(std::initializer_list<Tensor> parts);
// k vectors of length d -> [k,d]
Tensor stack(std::span<const Tensor> rows);

Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
// log(sigmoid(a)) without forming sigmoid(a).
Tensor log_sigmoid(const Tensor& a);
// Softmax over all elements of a rank-1 tensor.
Tensor softmax(const Tensor& a);
Tensor log_softmax(const Tensor& a);
// log(max(a, floor)); the adjoint is zero where the floor is active.
Tensor log(const Tensor& a, double floor = 0.0);
Tensor exp(const Tensor& a);

// Sum of all elements -> scalar.
Tensor sum(const Tensor& a);
// [k] weights, [k,d] rows -> [d]
Tensor weighted_sum(const Tensor& weights, const Tensor& rows);
// [r] x [c] -> [r,c]
Tensor outer_product(const Tensor& p, const Tensor& q);
// Row `id` of a [V,d] table -> [d]
Tensor embedding_lookup(const Tensor& table, std::size_t id);
// Element `index` (flat) -> scalar
Tensor select(const Tensor& a, std::size_t index);
// Sum of the elements at the given flat indices -> scalar. Empty index list
// yields 0.
Tensor gather_sum(const Tensor& a, std::span<const std::size_t> indices);
// Rows of a [m,n] matrix -> [indices.size(), n]
Tensor gather_rows(const Tensor& a, std::span<const std::size_t> indices);
// log(sum(exp(a))) over all elements -> scalar
Tensor logsumexp(const Tensor& a);

}  // namespace reflm

#endif  // REFLM_NUMCORE_OPS_H_
