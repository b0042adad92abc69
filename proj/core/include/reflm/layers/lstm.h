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

#ifndef REFLM_LAYERS_LSTM_H_
#define REFLM_LAYERS_LSTM_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reflm/layers/embedding.h"
#include "reflm/numcore/parameters.h"
#include "reflm/numcore/tensor.h"

namespace reflm {

struct LstmState {
  Tensor hidden;  // [hidden_dim]
  Tensor cell;    // [hidden_dim]
};

// Single-layer LSTM without peepholes. Each gate matrix acts on the
// concatenation [x, h_prev] and has shape [hidden_dim, input_dim + hidden_dim].
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Tensor w_input, w_forget, w_output, w_cell;
  Tensor b_input, b_forget, b_output, b_cell;

  // Weights uniform in [-0.1, 0.1]; biases zero except the forget gate (1.0).
  static LstmParams create(ParameterSet& params, const std::string& prefix,
                           std::size_t input_dim, std::size_t hidden_dim,
                           Initializer& init);

  LstmState zero_state() const;
};

LstmState lstm_step(const LstmParams& params, const Tensor& x,
                    const LstmState& state);

struct EncodedSequence {
  std::vector<Tensor> hiddens;  // one per token
  LstmState final;
};

// Runs the LSTM over embedded tokens. Throws on an empty token list.
EncodedSequence encode_sequence(const LstmParams& params,
                                const EmbeddingTable& embedding,
                                std::span<const std::size_t> tokens,
                                const std::optional<LstmState>& init = std::nullopt);

}  // namespace reflm

#endif  // REFLM_LAYERS_LSTM_H_
