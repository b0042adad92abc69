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

#include "reflm/layers/lstm.h"

#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {

LstmParams LstmParams::create(ParameterSet& params, const std::string& prefix,
                              std::size_t input_dim, std::size_t hidden_dim,
                              Initializer& init) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  const Shape w{hidden_dim, input_dim + hidden_dim};
  p.w_input = params.add(prefix + ".W_i", init.uniform(w));
  p.w_forget = params.add(prefix + ".W_f", init.uniform(w));
  p.w_output = params.add(prefix + ".W_o", init.uniform(w));
  p.w_cell = params.add(prefix + ".W_c", init.uniform(w));
  p.b_input = params.add(prefix + ".b_i", init.constant({hidden_dim}, 0.0));
  p.b_forget = params.add(prefix + ".b_f", init.constant({hidden_dim}, 1.0));
  p.b_output = params.add(prefix + ".b_o", init.constant({hidden_dim}, 0.0));
  p.b_cell = params.add(prefix + ".b_c", init.constant({hidden_dim}, 0.0));
  return p;
}

LstmState LstmParams::zero_state() const {
  return {Tensor::zeros({hidden_dim}), Tensor::zeros({hidden_dim})};
}

LstmState lstm_step(const LstmParams& params, const Tensor& x,
                    const LstmState& state) {
  if (x.rank() != 1 || x.dim(0) != params.input_dim) {
    throw ShapeError("lstm_step: input " + shape_string(x.shape()) +
                     " does not match input_dim " +
                     std::to_string(params.input_dim));
  }
  if (state.hidden.rank() != 1 || state.hidden.dim(0) != params.hidden_dim ||
      state.cell.rank() != 1 || state.cell.dim(0) != params.hidden_dim) {
    throw ShapeError("lstm_step: state " + shape_string(state.hidden.shape()) +
                     "/" + shape_string(state.cell.shape()) +
                     " does not match hidden_dim " +
                     std::to_string(params.hidden_dim));
  }
  const Tensor joint = concat({x, state.hidden});
  const Tensor i = sigmoid(add(matvec(params.w_input, joint), params.b_input));
  const Tensor f = sigmoid(add(matvec(params.w_forget, joint), params.b_forget));
  const Tensor o = sigmoid(add(matvec(params.w_output, joint), params.b_output));
  const Tensor g = tanh(add(matvec(params.w_cell, joint), params.b_cell));
  const Tensor cell = add(mul(f, state.cell), mul(i, g));
  const Tensor hidden = mul(o, tanh(cell));
  return {hidden, cell};
}

EncodedSequence encode_sequence(const LstmParams& params,
                                const EmbeddingTable& embedding,
                                std::span<const std::size_t> tokens,
                                const std::optional<LstmState>& init) {
  if (tokens.empty()) {
    throw std::invalid_argument("encode_sequence: empty token list");
  }
  EncodedSequence out;
  out.hiddens.reserve(tokens.size());
  LstmState state = init.value_or(params.zero_state());
  for (std::size_t id : tokens) {
    state = lstm_step(params, embedding.lookup(id), state);
    out.hiddens.push_back(state.hidden);
  }
  out.final = state;
  return out;
}

}  // namespace reflm
