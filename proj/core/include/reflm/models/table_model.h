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

#ifndef REFLM_MODELS_TABLE_MODEL_H_
#define REFLM_MODELS_TABLE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reflm/layers/attention.h"
#include "reflm/layers/embedding.h"
#include "reflm/layers/lstm.h"
#include "reflm/models/mixture.h"
#include "reflm/numcore/parameters.h"

namespace reflm {

// R x C grid of single-token cells with one attribute token per column.
// Multi-token cells have already been collapsed to per-row special tokens
// and empty cells hold the EMPTY token.
struct DatabaseTable {
  std::vector<std::string> attribute_tokens;          // s_c surfaces
  std::vector<std::vector<std::string>> cell_tokens;  // t_{r,c} surfaces
  std::vector<std::size_t> attributes;                // ids
  std::vector<std::vector<std::size_t>> cells;        // ids

  // Dimensions come from the ids, or from the surfaces before ids exist.
  std::size_t rows() const {
    return cells.empty() ? cell_tokens.size() : cells.size();
  }
  std::size_t cols() const {
    return attributes.empty() ? attribute_tokens.size() : attributes.size();
  }
  std::size_t flat_index(std::size_t r, std::size_t c) const {
    return r * cols() + c;
  }
  // Flat indices of every cell whose surface equals `surface`.
  std::vector<std::size_t> matching_cells(const std::string& surface) const;

  // Throws unless R >= 1, C >= 1 and every row has C cells.
  void validate() const;
};

enum class Speaker { kMachine, kUser };

struct Utterance {
  Speaker speaker = Speaker::kMachine;
  std::vector<std::string> tokens;  // surfaces, after table substitution
  std::vector<std::size_t> ids;
  // Machine utterances only: flat indices of table cells matching each token.
  std::vector<std::vector<std::size_t>> cell_candidates;
  std::vector<std::uint8_t> copy_labels;
};

// Alternating machine/user utterances, starting with the machine.
struct DialogueExample {
  std::vector<Utterance> turns;
  std::shared_ptr<const DatabaseTable> table;

  void validate() const;
};

struct TableModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t attention_dim = 32;
  bool use_reference = true;       // table pointer + switch
  bool sentence_attention = false;  // attention over the previous utterance
  std::size_t bos_id = 1;
  std::size_t eos_id = 2;
};

// Distributions produced by one table-pointer query.
struct TablePointerOutput {
  Tensor attribute_probs;  // p^a [C]
  Tensor row_probs;        // p^r [R]
  Tensor column_probs;     // p^c [C]
  Tensor copy_probs;       // p^copy [R, C]
};

struct EncodedTable {
  Tensor attribute_vectors;  // g_c stacked [C, E]
  ProjectedKeys attribute_keys;
  Tensor cells;                         // e_{r,c} stacked [R*C, H]
  std::vector<Tensor> row_slices;       // per r: [C, H]
  std::vector<Tensor> column_slices;    // per c: [R, H]
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct HistoryEncoding {
  LstmState turn_state;                // hidden is u_{i-1}
  std::vector<Tensor> previous_states;  // token states of the last utterance
};

struct DialogueStep {
  MixtureStep mixture;
  std::optional<TablePointerOutput> pointer;
  Tensor sentence_attention;  // over the previous utterance, when enabled
};

class TableModel {
 public:
  TableModel(const TableModelConfig& config, std::uint64_t seed);

  TableModel(const TableModel&) = delete;
  TableModel& operator=(const TableModel&) = delete;

  const TableModelConfig& config() const { return config_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  // g_c = W_E s_c and e_{r,c} = tanh(W [W_E t_{r,c}, g_c]).
  EncodedTable encode_table(const DatabaseTable& table) const;

  // Attribute -> row -> column attention conditioned on q, then
  // p^copy = p^r (outer) p^c.
  TablePointerOutput table_pointer(const EncodedTable& table,
                                   const Tensor& query) const;

  // Hierarchical encoding of `history` (the utterances before the one being
  // decoded). An empty history yields the learned initial turn state.
  HistoryEncoding encode_history(const std::vector<Utterance>& history) const;

  // Attention keys over the token states of the previous utterance.
  ProjectedKeys project_utterance(const std::vector<Tensor>& states) const;

  // s = LSTM_D(W_E y_{v-1}, s_{v-1}); switch = sigmoid(W s [+ W' ctx]);
  // p^vocab = softmax(W s [+ W' ctx]); table pointer queried with s.
  DialogueStep dialogue_decode_step(std::size_t prev_token,
                                    const LstmState& prev_state,
                                    const EncodedTable* table,
                                    const ProjectedKeys* previous_utterance,
                                    bool use_sentence_attention) const;

  // Teacher-forced NLL over every machine token (plus one EOS per machine
  // utterance).
  Tensor dialogue_nll(const DialogueExample& example, TrainingMode mode) const;

  // Unclamped log p for every scored machine token, in dialogue order.
  std::vector<double> token_log_probs(const DialogueExample& example) const;

  // Teacher-forced steps for one machine utterance (index into turns).
  std::vector<DialogueStep> teacher_forced_steps(const DialogueExample& example,
                                                 std::size_t turn) const;

 private:
  template <typename Visitor>
  void run_dialogue(const DialogueExample& example, Visitor&& visit) const;

  std::size_t sentence_key_dim() const { return config_.hidden_dim; }

  TableModelConfig config_;
  ParameterSet params_;
  EmbeddingTable embedding_;
  LstmParams sentence_encoder_;
  LstmParams turn_encoder_;
  Tensor initial_turn_state_;  // [H]
  LstmParams decoder_;
  Tensor cell_weights_;  // [H, 2E]
  AttentionParams attribute_attention_;
  AttentionParams row_attention_;
  AttentionParams column_attention_;
  AttentionParams sentence_attention_;
  Tensor switch_state_;     // [1, H]
  Tensor switch_context_;   // [1, H]
  Tensor vocab_state_;      // [V, H]
  Tensor vocab_context_;    // [V, H]
};

}  // namespace reflm

#endif  // REFLM_MODELS_TABLE_MODEL_H_
