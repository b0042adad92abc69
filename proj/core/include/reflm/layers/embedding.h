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

#ifndef REFLM_LAYERS_EMBEDDING_H_
#define REFLM_LAYERS_EMBEDDING_H_

#include <cstddef>
#include <string>

#include "reflm/numcore/parameters.h"
#include "reflm/numcore/tensor.h"

namespace reflm {

struct EmbeddingTable {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  Tensor matrix;  // [vocab_size, embed_dim]

  static EmbeddingTable create(ParameterSet& params, const std::string& name,
                               std::size_t vocab_size, std::size_t embed_dim,
                               Initializer& init);

  Tensor lookup(std::size_t id) const;
};

}  // namespace reflm

#endif  // REFLM_LAYERS_EMBEDDING_H_
