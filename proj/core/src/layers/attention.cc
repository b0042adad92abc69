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

#include "reflm/layers/attention.h"

#include "reflm/numcore/ops.h"

namespace reflm {

AttentionParams AttentionParams::create(ParameterSet& params,
                                        const std::string& prefix,
                                        std::size_t key_dim,
                                        std::size_t query_dim,
                                        std::size_t attention_dim,
                                        Initializer& init) {
  AttentionParams p;
  p.key_dim = key_dim;
  p.query_dim = query_dim;
  p.attention_dim = attention_dim;
  p.w_key = params.add(prefix + ".W_key", init.uniform({attention_dim, key_dim}));
  p.w_query =
      params.add(prefix + ".W_query", init.uniform({attention_dim, query_dim}));
  p.score = params.add(prefix + ".v", init.uniform({attention_dim}));
  return p;
}

ProjectedKeys project_keys(const AttentionParams& params, const Tensor& keys) {
  if (keys.rank() != 2 || keys.dim(1) != params.key_dim) {
    throw ShapeError("attend: keys " + shape_string(keys.shape()) +
                     " do not match key_dim " + std::to_string(params.key_dim));
  }
  return {keys, matmul(keys, transpose(params.w_key))};
}

ProjectedKeys project_keys(const AttentionParams& params,
                           std::span<const Tensor> keys) {
  if (keys.empty()) throw ShapeError("attend: empty key set");
  return project_keys(params, stack(keys));
}

Tensor attend(const AttentionParams& params, const ProjectedKeys& keys,
              const Tensor& query) {
  if (query.rank() != 1 || query.dim(0) != params.query_dim) {
    throw ShapeError("attend: query " + shape_string(query.shape()) +
                     " does not match query_dim " +
                     std::to_string(params.query_dim));
  }
  const Tensor hidden =
      tanh(add_rows(keys.projected, matvec(params.w_query, query)));
  return softmax(matvec(hidden, params.score));
}

Tensor attend(const AttentionParams& params, std::span<const Tensor> keys,
              const Tensor& query) {
  return attend(params, project_keys(params, keys), query);
}

}  // namespace reflm
