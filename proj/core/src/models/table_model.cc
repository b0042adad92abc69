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

#include "reflm/models/table_model.h"

#include <numeric>
#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {

std::vector<std::size_t> DatabaseTable::matching_cells(
    const std::string& surface) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < cell_tokens.size(); ++r) {
    for (std::size_t c = 0; c < cell_tokens[r].size(); ++c) {
      if (cell_tokens[r][c] == surface) out.push_back(flat_index(r, c));
    }
  }
  return out;
}

void DatabaseTable::validate() const {
  if (attributes.empty() || cells.empty()) {
    throw std::invalid_argument("table must have at least one row and column");
  }
  if (attribute_tokens.size() != attributes.size() ||
      cell_tokens.size() != cells.size()) {
    throw std::invalid_argument("table ids and surfaces differ in size");
  }
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (cells[r].size() != cols() || cell_tokens[r].size() != cols()) {
      throw std::invalid_argument("table row " + std::to_string(r) + " has " +
                                  std::to_string(cells[r].size()) +
                                  " cells, expected " + std::to_string(cols()));
    }
  }
}

void DialogueExample::validate() const {
  if (!table) throw std::invalid_argument("dialogue has no table");
  for (std::size_t t = 0; t < turns.size(); ++t) {
    const Utterance& u = turns[t];
    const Speaker expected = t % 2 == 0 ? Speaker::kMachine : Speaker::kUser;
    if (u.speaker != expected) {
      throw std::invalid_argument("dialogue turn " + std::to_string(t) +
                                  " breaks machine/user alternation");
    }
    if (u.ids.empty() || u.ids.size() != u.tokens.size()) {
      throw std::invalid_argument("dialogue turn " + std::to_string(t) +
                                  " is empty or has mismatched ids");
    }
    if (u.speaker == Speaker::kMachine) {
      if (u.cell_candidates.size() != u.ids.size() ||
          u.copy_labels.size() != u.ids.size()) {
        throw std::invalid_argument("machine turn " + std::to_string(t) +
                                    " lacks per-token copy annotations");
      }
      const std::size_t cells = table->rows() * table->cols();
      for (std::size_t v = 0; v < u.ids.size(); ++v) {
        if (u.copy_labels[v] != 0 && u.cell_candidates[v].empty()) {
          throw std::invalid_argument("labelled cell copy without a matching cell");
        }
        for (std::size_t c : u.cell_candidates[v]) {
          if (c >= cells) throw std::invalid_argument("labelled cell outside table");
        }
      }
    }
  }
}

TableModel::TableModel(const TableModelConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config.vocab_size == 0 || config.embed_dim == 0 || config.hidden_dim == 0 ||
      config.attention_dim == 0) {
    throw std::invalid_argument("table model dimensions must be positive");
  }
  Initializer init(seed);
  const std::size_t e = config.embed_dim, h = config.hidden_dim,
                    a = config.attention_dim, v = config.vocab_size;
  embedding_ = EmbeddingTable::create(params_, "table.embedding", v, e, init);
  sentence_encoder_ =
      LstmParams::create(params_, "table.sentence_encoder.lstm", e, h, init);
  turn_encoder_ = LstmParams::create(params_, "table.turn_encoder.lstm", h, h, init);
  initial_turn_state_ = params_.add("table.turn_encoder.u0", init.uniform({h}));
  decoder_ = LstmParams::create(params_, "table.decoder.lstm", e, h, init);
  if (config.use_reference) {
    cell_weights_ = params_.add("table.cell.W", init.uniform({h, 2 * e}));
    attribute_attention_ =
        AttentionParams::create(params_, "table.attribute_attention", e, h, a, init);
    row_attention_ =
        AttentionParams::create(params_, "table.row_attention", h, h, a, init);
    column_attention_ =
        AttentionParams::create(params_, "table.column_attention", h, h, a, init);
    switch_state_ = params_.add("table.switch.W_state", init.uniform({1, h}));
  }
  if (config.sentence_attention) {
    sentence_attention_ =
        AttentionParams::create(params_, "table.sentence_attention", h, h, a, init);
    if (config.use_reference) {
      switch_context_ = params_.add("table.switch.W_context", init.uniform({1, h}));
    }
  }
  vocab_state_ = params_.add("table.vocab.W_state", init.uniform({v, h}));
  if (config.sentence_attention) {
    vocab_context_ = params_.add("table.vocab.W_context", init.uniform({v, h}));
  }
}

EncodedTable TableModel::encode_table(const DatabaseTable& table) const {
  if (!config_.use_reference) {
    throw std::logic_error("encode_table on a model without table reference");
  }
  table.validate();
  EncodedTable out;
  out.rows = table.rows();
  out.cols = table.cols();
  std::vector<Tensor> attrs;
  attrs.reserve(out.cols);
  for (std::size_t id : table.attributes) attrs.push_back(embedding_.lookup(id));
  out.attribute_vectors = stack(attrs);
  out.attribute_keys = project_keys(attribute_attention_, out.attribute_vectors);

  std::vector<Tensor> inputs;
  inputs.reserve(out.rows * out.cols);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      inputs.push_back(concat({embedding_.lookup(table.cells[r][c]), attrs[c]}));
    }
  }
  out.cells = tanh(matmul(stack(inputs), transpose(cell_weights_)));

  std::vector<std::size_t> idx(out.cols);
  for (std::size_t r = 0; r < out.rows; ++r) {
    std::iota(idx.begin(), idx.end(), r * out.cols);
    out.row_slices.push_back(gather_rows(out.cells, idx));
  }
  idx.resize(out.rows);
  for (std::size_t c = 0; c < out.cols; ++c) {
    for (std::size_t r = 0; r < out.rows; ++r) idx[r] = r * out.cols + c;
    out.column_slices.push_back(gather_rows(out.cells, idx));
  }
  return out;
}

TablePointerOutput TableModel::table_pointer(const EncodedTable& table,
                                             const Tensor& query) const {
  TablePointerOutput out;
  out.attribute_probs = attend(attribute_attention_, table.attribute_keys, query);

  std::vector<Tensor> rows;
  rows.reserve(table.rows);
  for (const Tensor& slice : table.row_slices) {
    rows.push_back(weighted_sum(out.attribute_probs, slice));
  }
  out.row_probs = attend(row_attention_, rows, query);

  std::vector<Tensor> cols;
  cols.reserve(table.cols);
  for (const Tensor& slice : table.column_slices) {
    cols.push_back(weighted_sum(out.row_probs, slice));
  }
  out.column_probs = attend(column_attention_, cols, query);
  out.copy_probs = outer_product(out.row_probs, out.column_probs);
  return out;
}

HistoryEncoding TableModel::encode_history(
    const std::vector<Utterance>& history) const {
  HistoryEncoding out;
  out.turn_state = {initial_turn_state_, Tensor::zeros({config_.hidden_dim})};
  for (const Utterance& u : history) {
    EncodedSequence enc = encode_sequence(sentence_encoder_, embedding_, u.ids);
    out.turn_state = lstm_step(turn_encoder_, enc.final.hidden, out.turn_state);
    out.previous_states = std::move(enc.hiddens);
  }
  return out;
}

ProjectedKeys TableModel::project_utterance(const std::vector<Tensor>& states) const {
  if (!config_.sentence_attention) {
    throw std::logic_error("model was built without sentence attention");
  }
  return project_keys(sentence_attention_, states);
}

DialogueStep TableModel::dialogue_decode_step(
    std::size_t prev_token, const LstmState& prev_state,
    const EncodedTable* table, const ProjectedKeys* previous_utterance,
    bool use_sentence_attention) const {
  if (use_sentence_attention && !config_.sentence_attention) {
    throw std::logic_error("model was built without sentence attention");
  }
  DialogueStep out;
  MixtureStep& step = out.mixture;
  step.decoder = lstm_step(decoder_, embedding_.lookup(prev_token), prev_state);
  const Tensor& s = step.decoder.hidden;

  Tensor logits = matvec(vocab_state_, s);
  Tensor switch_logit;
  if (config_.use_reference) switch_logit = matvec(switch_state_, s);

  if (use_sentence_attention) {
    if (previous_utterance != nullptr) {
      out.sentence_attention = attend(sentence_attention_, *previous_utterance, s);
      step.context = weighted_sum(out.sentence_attention, previous_utterance->keys);
    } else {
      step.context = Tensor::zeros({sentence_key_dim()});
    }
    logits = add(logits, matvec(vocab_context_, step.context));
    if (config_.use_reference) {
      switch_logit = add(switch_logit, matvec(switch_context_, step.context));
    }
  }
  step.vocab_log_probs = log_softmax(logits);

  if (config_.use_reference) {
    if (table == nullptr) throw std::invalid_argument("table pointer needs a table");
    step.switch_logit = switch_logit;
    out.pointer = table_pointer(*table, s);
    step.copy_probs = out.pointer->copy_probs;
  }
  return out;
}

template <typename Visitor>
void TableModel::run_dialogue(const DialogueExample& example,
                              Visitor&& visit) const {
  example.validate();
  std::optional<EncodedTable> table;
  if (config_.use_reference) table = encode_table(*example.table);

  LstmState turn = {initial_turn_state_, Tensor::zeros({config_.hidden_dim})};
  std::optional<ProjectedKeys> previous;
  const std::vector<std::size_t> no_candidates;
  for (std::size_t t = 0; t < example.turns.size(); ++t) {
    const Utterance& u = example.turns[t];
    if (u.speaker == Speaker::kMachine) {
      LstmState state = turn;
      std::size_t prev = config_.bos_id;
      for (std::size_t v = 0; v <= u.ids.size(); ++v) {
        const bool is_eos = v == u.ids.size();
        const std::size_t target = is_eos ? config_.eos_id : u.ids[v];
        DialogueStep step = dialogue_decode_step(
            prev, state, table ? &*table : nullptr, previous ? &*previous : nullptr,
            config_.sentence_attention);
        const auto& candidates = is_eos ? no_candidates : u.cell_candidates[v];
        const bool z = !is_eos && u.copy_labels[v] != 0;
        state = step.mixture.decoder;
        visit(t, v, step, target, z, candidates);
        prev = target;
      }
    }
    EncodedSequence enc = encode_sequence(sentence_encoder_, embedding_, u.ids);
    turn = lstm_step(turn_encoder_, enc.final.hidden, turn);
    if (config_.sentence_attention) {
      previous = project_keys(sentence_attention_, enc.hiddens);
    }
  }
}

Tensor TableModel::dialogue_nll(const DialogueExample& example,
                                TrainingMode mode) const {
  std::vector<Tensor> terms;
  run_dialogue(example, [&](std::size_t, std::size_t, const DialogueStep& step,
                            std::size_t target, bool z,
                            const std::vector<std::size_t>& candidates) {
    terms.push_back(token_nll(step.mixture, target, z, candidates, mode));
  });
  if (terms.empty()) throw std::invalid_argument("dialogue has no machine tokens");
  return sum(concat(terms));
}

std::vector<double> TableModel::token_log_probs(
    const DialogueExample& example) const {
  NoRecordScope no_record;
  std::vector<double> out;
  run_dialogue(example, [&](std::size_t, std::size_t, const DialogueStep& step,
                            std::size_t target, bool,
                            const std::vector<std::size_t>& candidates) {
    out.push_back(token_log_prob(step.mixture, target, candidates));
  });
  return out;
}

std::vector<DialogueStep> TableModel::teacher_forced_steps(
    const DialogueExample& example, std::size_t turn) const {
  if (turn >= example.turns.size() ||
      example.turns[turn].speaker != Speaker::kMachine) {
    throw std::invalid_argument("turn " + std::to_string(turn) +
                                " is not a machine utterance");
  }
  NoRecordScope no_record;
  std::vector<DialogueStep> out;
  run_dialogue(example, [&](std::size_t t, std::size_t, const DialogueStep& step,
                            std::size_t, bool, const std::vector<std::size_t>&) {
    if (t == turn) out.push_back(step);
  });
  return out;
}

}  // namespace reflm
