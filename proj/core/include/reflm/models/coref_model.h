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

#ifndef REFLM_MODELS_COREF_MODEL_H_
#define REFLM_MODELS_COREF_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reflm/layers/attention.h"
#include "reflm/layers/embedding.h"
#include "reflm/layers/lstm.h"
#include "reflm/numcore/parameters.h"

namespace reflm {

// Token sequence with single-token mention annotations. Entity ids are
// 1-based and dense in order of first mention.
struct AnnotatedDocument {
  std::vector<std::string> tokens;
  std::vector<std::size_t> ids;
  std::vector<std::optional<std::size_t>> mentions;

  std::size_t entity_count() const;
  // Throws if an entity id appears before all smaller ids have been
  // introduced (i.e. out of first-mention order) or lengths disagree.
  void validate() const;
};

// h^e: slot 0 is the virtual empty entity, slot k the latest state of the
// k-th introduced entity.
struct EntityStateSet {
  std::vector<Tensor> states;
  std::size_t size() const { return states.size(); }
};

struct CorefDecision {
  bool is_mention = false;  // z
  std::size_t entity = 0;   // v; 0 introduces a new entity
};

struct CorefPrediction {
  Tensor entity_probs;  // p^coref over the entity slots
  Tensor context;       // d = sum_v p(v) h^e_v
  Tensor switch_logit;  // p(z=1) = sigmoid
  double switch_prob() const;
};

struct CorefModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t attention_dim = 32;
  // false builds the plain LSTM language model (shares parameter names with
  // the reference model so its weights can initialize one).
  bool use_reference = true;
};

class CorefModel {
 public:
  CorefModel(const CorefModelConfig& config, std::uint64_t seed);

  CorefModel(const CorefModel&) = delete;
  CorefModel& operator=(const CorefModel&) = delete;

  const CorefModelConfig& config() const { return config_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  EntityStateSet initial_entities() const;

  CorefPrediction predict_step(const Tensor& prev_hidden,
                               const EntityStateSet& entities) const;

  // log softmax(W_1 h)
  Tensor plain_word_log_probs(const Tensor& prev_hidden) const;
  // log softmax(W_1 tanh(W_2 [h, h^e_v]))
  Tensor entity_word_log_probs(const Tensor& prev_hidden,
                               const Tensor& entity_state) const;

  // log p(x, z, v | h, h^e): z=0 -> log p_plain(x) + log(1 - pi);
  // z=1 -> log p_entity(x | v) + log p^coref(v) + log pi.
  Tensor decision_log_prob(const Tensor& prev_hidden,
                           const EntityStateSet& entities,
                           const CorefPrediction& prediction, std::size_t target,
                           const CorefDecision& decision) const;

  // exp(decision_log_prob); throws when v is out of range.
  double token_prob(const Tensor& prev_hidden, const EntityStateSet& entities,
                    std::size_t target, const CorefDecision& decision) const;

  // log p(x | h, h^e) summed over (z, v) for the current entity set.
  double marginal_log_prob(const Tensor& prev_hidden,
                           const EntityStateSet& entities,
                           std::size_t target) const;

  // Supervised NLL of the annotated decisions and words. For the plain LM
  // this is the ordinary word NLL.
  Tensor document_nll(const AnnotatedDocument& doc) const;

  // Per-token log probability: the decision-joint for the reference model,
  // log p(x) for the plain LM.
  std::vector<double> token_log_probs(const AnnotatedDocument& doc) const;

  struct TraceStep {
    std::vector<double> entity_probs;
    double switch_prob = 0.0;
    std::size_t entity_count = 0;
  };
  // p^coref and the switch at every position, following the annotations.
  std::vector<TraceStep> trace(const AnnotatedDocument& doc) const;

  LstmState step_lstm(std::size_t token, const LstmState& state) const;

 private:
  template <typename Visitor>
  void run_document(const AnnotatedDocument& doc, Visitor&& visit) const;

  CorefModelConfig config_;
  ParameterSet params_;
  EmbeddingTable embedding_;
  LstmParams lstm_;
  Tensor output_weights_;  // W_1 [V, H]
  Tensor entity_weights_;  // W_2 [H, 2H]
  Tensor switch_weights_;  // [1, 2H]
  AttentionParams entity_attention_;
  Tensor virtual_entity_;  // h^e_0 [H]
};

// z=0 leaves the set unchanged; z=1, v=0 appends `hidden`; z=1, v>0 replaces
// slot v. Throws if v is out of range.
EntityStateSet update_entities(const EntityStateSet& entities,
                               const CorefDecision& decision,
                               const Tensor& hidden);

}  // namespace reflm

#endif  // REFLM_MODELS_COREF_MODEL_H_
