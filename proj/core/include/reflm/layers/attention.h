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

#ifndef REFLM_LAYERS_ATTENTION_H_
#define REFLM_LAYERS_ATTENTION_H_

#include <cstddef>
#include <span>
#include <string>

#include "reflm/numcore/parameters.h"
#include "reflm/numcore/tensor.h"

namespace reflm {

// Additive attention: score_k = v . tanh(W_key h_k + W_query q), followed by a
// softmax over k.
struct AttentionParams {
  std::size_t key_dim = 0;
  std::size_t query_dim = 0;
  std::size_t attention_dim = 0;
  Tensor w_key;    // [attention_dim, key_dim]
  Tensor w_query;  // [attention_dim, query_dim]
  Tensor score;    // [attention_dim]

  static AttentionParams create(ParameterSet& params, const std::string& prefix,
                                std::size_t key_dim, std::size_t query_dim,
                                std::size_t attention_dim, Initializer& init);
};

// Keys stacked into a matrix together with their projections. Computing this
// once lets a decoder attend to a fixed key set at every step.
struct ProjectedKeys {
  Tensor keys;       // [k, key_dim]
  Tensor projected;  // [k, attention_dim]
  std::size_t count() const { return keys.dim(0); }
};

ProjectedKeys project_keys(const AttentionParams& params, const Tensor& keys);
ProjectedKeys project_keys(const AttentionParams& params,
                           std::span<const Tensor> keys);

// Probability vector over the keys. Throws on an empty key set or on
// dimension mismatches.
Tensor attend(const AttentionParams& params, const ProjectedKeys& keys,
              const Tensor& query);
Tensor attend(const AttentionParams& params, std::span<const Tensor> keys,
              const Tensor& query);

}  // namespace reflm

#endif  // REFLM_LAYERS_ATTENTION_H_
