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

#ifndef REFLM_MODELS_RECIPE_MODEL_H_
#define REFLM_MODELS_RECIPE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "reflm/layers/attention.h"
#include "reflm/layers/embedding.h"
#include "reflm/layers/lstm.h"
#include "reflm/models/mixture.h"
#include "reflm/numcore/parameters.h"

namespace reflm {

struct TokenPosition {
  std::size_t ingredient = 0;
  std::size_t token = 0;
  friend bool operator==(const TokenPosition&, const TokenPosition&) = default;
};

// One ingredient list with its recipe. Surface tokens are kept next to the
// vocabulary ids so that copy candidates stay meaningful for tokens outside
// the decoder vocabulary.
struct RecipeExample {
  std::vector<std::vector<std::string>> ingredient_tokens;
  std::vector<std::string> recipe_tokens;
  std::vector<std::vector<std::size_t>> ingredients;  // ids
  std::vector<std::size_t> recipe;                     // ids
  // Per recipe token: ingredient positions with the same surface form.
  std::vector<std::vector<TokenPosition>> copy_candidates;
  // Per recipe token: 1 iff the token was string-matched to an ingredient.
  std::vector<std::uint8_t> copy_labels;

  // Checks label/candidate consistency and index ranges; throws on failure.
  void validate() const;
};

struct RecipeModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t attention_dim = 32;
  // false builds the attention encoder-decoder without the copy switch.
  bool use_reference = true;
  std::size_t bos_id = 1;
  std::size_t eos_id = 2;
};

class RecipeModel {
 public:
  RecipeModel(const RecipeModelConfig& config, std::uint64_t seed);

  RecipeModel(const RecipeModel&) = delete;
  RecipeModel& operator=(const RecipeModel&) = delete;

  const RecipeModelConfig& config() const { return config_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  struct EncodedIngredients {
    std::vector<std::vector<Tensor>> token_states;  // h_{i,j}
    std::vector<std::size_t> offsets;  // flat index of (i, 0)
    ProjectedKeys keys;                // all token states, flattened
    LstmState init;                    // sum of final ingredient states
    std::size_t flat_index(const TokenPosition& pos) const {
      return offsets[pos.ingredient] + pos.token;
    }
  };

  // Encodes each ingredient independently with the shared encoder. Throws if
  // the list or any ingredient is empty.
  EncodedIngredients encode_ingredients(
      const std::vector<std::vector<std::size_t>>& ingredients) const;

  // One attention-decoder step: s_v from [W_E y_{v-1}, d_{v-1}] and s_{v-1},
  // then p^copy, d_v, the switch and p^vocab.
  MixtureStep decode_step(std::size_t prev_token, const LstmState& prev_state,
                          const Tensor& prev_context,
                          const EncodedIngredients& encoded) const;

  // Teacher-forced steps over recipe + EOS.
  std::vector<MixtureStep> teacher_forced_steps(const RecipeExample& example) const;

  // Sum of per-token NLL over recipe + EOS. EOS is always a vocab event.
  Tensor sequence_nll(const RecipeExample& example, TrainingMode mode) const;

  // Unclamped log p(y_v) for every recipe token followed by EOS.
  std::vector<double> token_log_probs(const RecipeExample& example) const;

  // Flat candidate indices per target (recipe tokens, then an empty list for
  // EOS).
  std::vector<std::vector<std::size_t>> flat_candidates(
      const RecipeExample& example, const EncodedIngredients& encoded) const;

 private:
  RecipeModelConfig config_;
  ParameterSet params_;
  EmbeddingTable embedding_;
  LstmParams encoder_;
  LstmParams decoder_;
  AttentionParams copy_attention_;
  Tensor switch_weights_;  // [1, 2H]
  Tensor vocab_weights_;   // [V, 2H]
};

}  // namespace reflm

#endif  // REFLM_MODELS_RECIPE_MODEL_H_
