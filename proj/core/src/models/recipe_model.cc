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

#include "reflm/models/recipe_model.h"

#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {

void RecipeExample::validate() const {
  if (ingredients.size() != ingredient_tokens.size()) {
    throw std::invalid_argument("recipe example: ingredient ids/surfaces differ");
  }
  if (recipe.size() != recipe_tokens.size() ||
      copy_candidates.size() != recipe.size() ||
      copy_labels.size() != recipe.size()) {
    throw std::invalid_argument("recipe example: per-token fields differ in length");
  }
  for (std::size_t v = 0; v < recipe.size(); ++v) {
    if (copy_labels[v] != 0 && copy_candidates[v].empty()) {
      throw std::invalid_argument("recipe example: token " + std::to_string(v) +
                                  " labelled z=1 without candidates");
    }
    for (const TokenPosition& pos : copy_candidates[v]) {
      if (pos.ingredient >= ingredients.size() ||
          pos.token >= ingredients[pos.ingredient].size()) {
        throw std::invalid_argument("recipe example: candidate out of range");
      }
    }
  }
}

RecipeModel::RecipeModel(const RecipeModelConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config.vocab_size == 0 || config.embed_dim == 0 || config.hidden_dim == 0 ||
      config.attention_dim == 0) {
    throw std::invalid_argument("recipe model dimensions must be positive");
  }
  Initializer init(seed);
  const std::size_t e = config.embed_dim, h = config.hidden_dim;
  embedding_ = EmbeddingTable::create(params_, "recipe.embedding",
                                      config.vocab_size, e, init);
  encoder_ = LstmParams::create(params_, "recipe.encoder.lstm", e, h, init);
  decoder_ = LstmParams::create(params_, "recipe.decoder.lstm", e + h, h, init);
  copy_attention_ = AttentionParams::create(params_, "recipe.copy_attention", h, h,
                                            config.attention_dim, init);
  if (config.use_reference) {
    switch_weights_ = params_.add("recipe.switch.W", init.uniform({1, 2 * h}));
  }
  vocab_weights_ =
      params_.add("recipe.vocab.W", init.uniform({config.vocab_size, 2 * h}));
}

RecipeModel::EncodedIngredients RecipeModel::encode_ingredients(
    const std::vector<std::vector<std::size_t>>& ingredients) const {
  if (ingredients.empty()) {
    throw std::invalid_argument("encode_ingredients: empty ingredient list");
  }
  EncodedIngredients out;
  std::vector<Tensor> flat;
  Tensor hidden_sum, cell_sum;
  for (const auto& ingredient : ingredients) {
    if (ingredient.empty()) {
      throw std::invalid_argument("encode_ingredients: empty ingredient");
    }
    EncodedSequence seq = encode_sequence(encoder_, embedding_, ingredient);
    out.offsets.push_back(flat.size());
    flat.insert(flat.end(), seq.hiddens.begin(), seq.hiddens.end());
    if (!hidden_sum.defined()) {
      hidden_sum = seq.final.hidden;
      cell_sum = seq.final.cell;
    } else {
      hidden_sum = add(hidden_sum, seq.final.hidden);
      cell_sum = add(cell_sum, seq.final.cell);
    }
    out.token_states.push_back(std::move(seq.hiddens));
  }
  out.keys = project_keys(copy_attention_, flat);
  out.init = {hidden_sum, cell_sum};
  return out;
}

MixtureStep RecipeModel::decode_step(std::size_t prev_token,
                                     const LstmState& prev_state,
                                     const Tensor& prev_context,
                                     const EncodedIngredients& encoded) const {
  MixtureStep step;
  const Tensor input = concat({embedding_.lookup(prev_token), prev_context});
  step.decoder = lstm_step(decoder_, input, prev_state);
  const Tensor& s = step.decoder.hidden;
  step.copy_probs = attend(copy_attention_, encoded.keys, s);
  step.context = weighted_sum(step.copy_probs, encoded.keys.keys);
  const Tensor features = concat({s, step.context});
  if (config_.use_reference) {
    step.switch_logit = matvec(switch_weights_, features);
  }
  step.vocab_log_probs = log_softmax(matvec(vocab_weights_, features));
  return step;
}

std::vector<MixtureStep> RecipeModel::teacher_forced_steps(
    const RecipeExample& example) const {
  const EncodedIngredients encoded = encode_ingredients(example.ingredients);
  std::vector<MixtureStep> steps;
  steps.reserve(example.recipe.size() + 1);
  LstmState state = encoded.init;
  Tensor context = Tensor::zeros({config_.hidden_dim});
  std::size_t prev = config_.bos_id;
  for (std::size_t v = 0; v <= example.recipe.size(); ++v) {
    MixtureStep step = decode_step(prev, state, context, encoded);
    state = step.decoder;
    context = step.context;
    if (v < example.recipe.size()) prev = example.recipe[v];
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<std::vector<std::size_t>> RecipeModel::flat_candidates(
    const RecipeExample& example, const EncodedIngredients& encoded) const {
  std::vector<std::vector<std::size_t>> out(example.recipe.size() + 1);
  for (std::size_t v = 0; v < example.recipe.size(); ++v) {
    for (const TokenPosition& pos : example.copy_candidates[v]) {
      out[v].push_back(encoded.flat_index(pos));
    }
  }
  return out;
}

Tensor RecipeModel::sequence_nll(const RecipeExample& example,
                                 TrainingMode mode) const {
  const EncodedIngredients encoded = encode_ingredients(example.ingredients);
  const auto candidates = flat_candidates(example, encoded);
  LstmState state = encoded.init;
  Tensor context = Tensor::zeros({config_.hidden_dim});
  std::size_t prev = config_.bos_id;
  std::vector<Tensor> terms;
  terms.reserve(example.recipe.size() + 1);
  for (std::size_t v = 0; v <= example.recipe.size(); ++v) {
    const bool is_eos = v == example.recipe.size();
    const std::size_t target = is_eos ? config_.eos_id : example.recipe[v];
    const bool z = !is_eos && example.copy_labels[v] != 0;
    MixtureStep step = decode_step(prev, state, context, encoded);
    terms.push_back(token_nll(step, target, z, candidates[v], mode));
    state = step.decoder;
    context = step.context;
    prev = target;
  }
  return sum(concat(terms));
}

std::vector<double> RecipeModel::token_log_probs(
    const RecipeExample& example) const {
  NoRecordScope no_record;
  const EncodedIngredients encoded = encode_ingredients(example.ingredients);
  const auto candidates = flat_candidates(example, encoded);
  LstmState state = encoded.init;
  Tensor context = Tensor::zeros({config_.hidden_dim});
  std::size_t prev = config_.bos_id;
  std::vector<double> out;
  out.reserve(example.recipe.size() + 1);
  for (std::size_t v = 0; v <= example.recipe.size(); ++v) {
    const bool is_eos = v == example.recipe.size();
    const std::size_t target = is_eos ? config_.eos_id : example.recipe[v];
    MixtureStep step = decode_step(prev, state, context, encoded);
    out.push_back(token_log_prob(step, target, candidates[v]));
    state = step.decoder;
    context = step.context;
    prev = target;
  }
  return out;
}

}  // namespace reflm
