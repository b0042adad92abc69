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

#include "reflm/layers/embedding.h"

#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {

EmbeddingTable EmbeddingTable::create(ParameterSet& params,
                                      const std::string& name,
                                      std::size_t vocab_size,
                                      std::size_t embed_dim,
                                      Initializer& init) {
  EmbeddingTable table;
  table.vocab_size = vocab_size;
  table.embed_dim = embed_dim;
  table.matrix = params.add(name, init.uniform({vocab_size, embed_dim}));
  return table;
}

Tensor EmbeddingTable::lookup(std::size_t id) const {
  if (id >= vocab_size) {
    throw std::out_of_range("token id " + std::to_string(id) +
                            " outside embedding table of size " +
                            std::to_string(vocab_size));
  }
  return embedding_lookup(matrix, id);
}

}  // namespace reflm
