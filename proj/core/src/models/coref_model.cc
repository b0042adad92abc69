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

#include "reflm/models/coref_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {
namespace {

double log_sigmoid_value(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace

std::size_t AnnotatedDocument::entity_count() const {
  std::size_t n = 0;
  for (const auto& m : mentions) {
    if (m) n = std::max(n, *m);
  }
  return n;
}

void AnnotatedDocument::validate() const {
  if (tokens.size() != ids.size() || mentions.size() != ids.size()) {
    throw std::invalid_argument("document fields differ in length");
  }
  std::size_t introduced = 0;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (!mentions[i]) continue;
    const std::size_t k = *mentions[i];
    if (k == 0 || k > introduced + 1) {
      throw std::invalid_argument("mention at token " + std::to_string(i) +
                                  " references entity " + std::to_string(k) +
                                  " before its first mention");
    }
    if (k == introduced + 1) ++introduced;
  }
}

double CorefPrediction::switch_prob() const {
  return std::exp(log_sigmoid_value(switch_logit.item()));
}

CorefModel::CorefModel(const CorefModelConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config.vocab_size == 0 || config.embed_dim == 0 || config.hidden_dim == 0 ||
      config.attention_dim == 0) {
    throw std::invalid_argument("coref model dimensions must be positive");
  }
  Initializer init(seed);
  const std::size_t e = config.embed_dim, h = config.hidden_dim;
  embedding_ =
      EmbeddingTable::create(params_, "coref.embedding", config.vocab_size, e, init);
  lstm_ = LstmParams::create(params_, "coref.lstm", e, h, init);
  output_weights_ =
      params_.add("coref.W_1", init.uniform({config.vocab_size, h}));
  if (config.use_reference) {
    entity_weights_ = params_.add("coref.W_2", init.uniform({h, 2 * h}));
    switch_weights_ = params_.add("coref.switch.W", init.uniform({1, 2 * h}));
    entity_attention_ = AttentionParams::create(params_, "coref.entity_attention",
                                                h, h, config.attention_dim, init);
    virtual_entity_ = params_.add("coref.virtual_entity", init.uniform({h}));
  }
}

EntityStateSet CorefModel::initial_entities() const {
  if (!config_.use_reference) return {};
  return {{virtual_entity_}};
}

CorefPrediction CorefModel::predict_step(const Tensor& prev_hidden,
                                         const EntityStateSet& entities) const {
  if (!config_.use_reference) {
    throw std::logic_error("predict_step on a plain language model");
  }
  if (entities.states.empty()) {
    throw std::invalid_argument("entity set must contain the virtual entity");
  }
  CorefPrediction out;
  const ProjectedKeys keys = project_keys(entity_attention_, entities.states);
  out.entity_probs = attend(entity_attention_, keys, prev_hidden);
  out.context = weighted_sum(out.entity_probs, keys.keys);
  out.switch_logit = matvec(switch_weights_, concat({prev_hidden, out.context}));
  return out;
}

Tensor CorefModel::plain_word_log_probs(const Tensor& prev_hidden) const {
  return log_softmax(matvec(output_weights_, prev_hidden));
}

Tensor CorefModel::entity_word_log_probs(const Tensor& prev_hidden,
                                         const Tensor& entity_state) const {
  const Tensor mixed =
      tanh(matvec(entity_weights_, concat({prev_hidden, entity_state})));
  return log_softmax(matvec(output_weights_, mixed));
}

Tensor CorefModel::decision_log_prob(const Tensor& prev_hidden,
                                     const EntityStateSet& entities,
                                     const CorefPrediction& prediction,
                                     std::size_t target,
                                     const CorefDecision& decision) const {
  if (!decision.is_mention) {
    return add(select(plain_word_log_probs(prev_hidden), target),
               log_sigmoid(scale(prediction.switch_logit, -1.0)));
  }
  if (decision.entity >= entities.size()) {
    throw std::out_of_range("entity slot " + std::to_string(decision.entity) +
                            " outside entity set of size " +
                            std::to_string(entities.size()));
  }
  const Tensor word = select(
      entity_word_log_probs(prev_hidden, entities.states[decision.entity]), target);
  const Tensor choice = log(select(prediction.entity_probs, decision.entity));
  return add(add(word, choice), log_sigmoid(prediction.switch_logit));
}

double CorefModel::token_prob(const Tensor& prev_hidden,
                              const EntityStateSet& entities, std::size_t target,
                              const CorefDecision& decision) const {
  NoRecordScope no_record;
  if (decision.is_mention && decision.entity >= entities.size()) {
    throw std::out_of_range("entity slot out of range");
  }
  const CorefPrediction pred = predict_step(prev_hidden, entities);
  return std::exp(
      decision_log_prob(prev_hidden, entities, pred, target, decision).item());
}

double CorefModel::marginal_log_prob(const Tensor& prev_hidden,
                                     const EntityStateSet& entities,
                                     std::size_t target) const {
  NoRecordScope no_record;
  const CorefPrediction pred = predict_step(prev_hidden, entities);
  std::vector<double> terms;
  terms.push_back(
      decision_log_prob(prev_hidden, entities, pred, target, {false, 0}).item());
  for (std::size_t v = 0; v < entities.size(); ++v) {
    terms.push_back(
        decision_log_prob(prev_hidden, entities, pred, target, {true, v}).item());
  }
  const double hi = *std::max_element(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += std::exp(t - hi);
  return hi + std::log(total);
}

EntityStateSet update_entities(const EntityStateSet& entities,
                               const CorefDecision& decision,
                               const Tensor& hidden) {
  if (!decision.is_mention) return entities;
  if (decision.entity >= entities.size()) {
    throw std::out_of_range("entity slot " + std::to_string(decision.entity) +
                            " outside entity set of size " +
                            std::to_string(entities.size()));
  }
  EntityStateSet out = entities;
  if (decision.entity == 0) {
    out.states.push_back(hidden);
  } else {
    out.states[decision.entity] = hidden;
  }
  return out;
}

LstmState CorefModel::step_lstm(std::size_t token, const LstmState& state) const {
  return lstm_step(lstm_, embedding_.lookup(token), state);
}

template <typename Visitor>
void CorefModel::run_document(const AnnotatedDocument& doc, Visitor&& visit) const {
  doc.validate();
  LstmState state = lstm_.zero_state();
  EntityStateSet entities = initial_entities();
  // Entity id -> slot in the entity set.
  std::vector<std::size_t> slot_of(doc.entity_count() + 1, 0);
  for (std::size_t i = 0; i < doc.ids.size(); ++i) {
    CorefDecision decision;
    if (config_.use_reference && doc.mentions[i]) {
      const std::size_t k = *doc.mentions[i];
      decision.is_mention = true;
      decision.entity = slot_of[k];
    }
    visit(i, state.hidden, entities, decision);
    state = step_lstm(doc.ids[i], state);
    if (decision.is_mention) {
      if (decision.entity == 0) slot_of[*doc.mentions[i]] = entities.size();
      entities = update_entities(entities, decision, state.hidden);
    }
  }
}

Tensor CorefModel::document_nll(const AnnotatedDocument& doc) const {
  if (doc.ids.empty()) throw std::invalid_argument("empty document");
  std::vector<Tensor> terms;
  terms.reserve(doc.ids.size());
  run_document(doc, [&](std::size_t i, const Tensor& h, const EntityStateSet& ents,
                        const CorefDecision& decision) {
    if (!config_.use_reference) {
      terms.push_back(select(plain_word_log_probs(h), doc.ids[i]));
      return;
    }
    const CorefPrediction pred = predict_step(h, ents);
    terms.push_back(decision_log_prob(h, ents, pred, doc.ids[i], decision));
  });
  return scale(sum(concat(terms)), -1.0);
}

std::vector<double> CorefModel::token_log_probs(const AnnotatedDocument& doc) const {
  NoRecordScope no_record;
  std::vector<double> out;
  out.reserve(doc.ids.size());
  run_document(doc, [&](std::size_t i, const Tensor& h, const EntityStateSet& ents,
                        const CorefDecision& decision) {
    if (!config_.use_reference) {
      out.push_back(plain_word_log_probs(h)[doc.ids[i]]);
      return;
    }
    const CorefPrediction pred = predict_step(h, ents);
    out.push_back(decision_log_prob(h, ents, pred, doc.ids[i], decision).item());
  });
  return out;
}

std::vector<CorefModel::TraceStep> CorefModel::trace(
    const AnnotatedDocument& doc) const {
  NoRecordScope no_record;
  std::vector<TraceStep> out;
  run_document(doc, [&](std::size_t, const Tensor& h, const EntityStateSet& ents,
                        const CorefDecision&) {
    const CorefPrediction pred = predict_step(h, ents);
    out.push_back({pred.entity_probs.to_vector(), pred.switch_prob(), ents.size()});
  });
  return out;
}

}  // namespace reflm
