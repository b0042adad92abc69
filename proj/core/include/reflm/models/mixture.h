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

#ifndef REFLM_MODELS_MIXTURE_H_
#define REFLM_MODELS_MIXTURE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "reflm/layers/lstm.h"
#include "reflm/numcore/tensor.h"

namespace reflm {

enum class TrainingMode { kSupervised, kLatent };

TrainingMode parse_training_mode(const std::string& text);
const char* training_mode_name(TrainingMode mode);

// Log arguments in training objectives are clamped here so that a saturated
// switch cannot produce an infinite loss. Reported metrics are unclamped.
inline constexpr double kLogFloor = 1e-12;

// Outputs of one decoding step of a copy/vocab mixture.
struct MixtureStep {
  LstmState decoder;       // decoder.hidden is s
  Tensor context;          // d (undefined when the step has none)
  Tensor copy_probs;       // p^copy, flattened over referable positions
  Tensor vocab_log_probs;  // log p^vocab
  Tensor switch_logit;     // p(z=1) = sigmoid(switch_logit); undefined for
                           // models without a reference mechanism

  bool has_reference() const { return switch_logit.defined(); }
  double switch_prob() const;
  std::vector<double> vocab_probs() const;
};

// -log p(y, z) with z fixed by supervision. With z = 1 the copy probability
// is the total p^copy mass on `candidates`; z = 1 with no candidates throws.
Tensor token_nll_supervised(const MixtureStep& step, std::size_t target, bool z,
                            std::span<const std::size_t> candidates);

// -log p(y) with the switch marginalized. An empty candidate list means the
// copy branch contributes nothing.
Tensor token_nll_latent(const MixtureStep& step, std::size_t target,
                        std::span<const std::size_t> candidates);

// -log p^vocab(y); the objective of models without a reference mechanism.
Tensor token_nll_vocab(const MixtureStep& step, std::size_t target);

Tensor token_nll(const MixtureStep& step, std::size_t target, bool z,
                 std::span<const std::size_t> candidates, TrainingMode mode);

// Unclamped log p(y) of the step's mixture (or of p^vocab when the step has no
// switch), evaluated on plain doubles. May return -inf.
double token_log_prob(const MixtureStep& step, std::size_t target,
                      std::span<const std::size_t> candidates);

}  // namespace reflm

#endif  // REFLM_MODELS_MIXTURE_H_
