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

#include "reflm/models/mixture.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reflm/numcore/ops.h"

namespace reflm {

TrainingMode parse_training_mode(const std::string& text) {
  if (text == "supervised") return TrainingMode::kSupervised;
  if (text == "latent") return TrainingMode::kLatent;
  throw std::invalid_argument("unknown training mode '" + text +
                              "' (expected supervised|latent)");
}

const char* training_mode_name(TrainingMode mode) {
  return mode == TrainingMode::kSupervised ? "supervised" : "latent";
}

double MixtureStep::switch_prob() const {
  const double x = switch_logit.item();
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> MixtureStep::vocab_probs() const {
  std::vector<double> out(vocab_log_probs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(vocab_log_probs[i]);
  return out;
}

namespace {

Tensor vocab_branch(const MixtureStep& step, std::size_t target) {
  return add(select(step.vocab_log_probs, target),
             log_sigmoid(scale(step.switch_logit, -1.0)));
}

Tensor copy_branch(const MixtureStep& step,
                   std::span<const std::size_t> candidates) {
  return add(log(gather_sum(step.copy_probs, candidates), kLogFloor),
             log_sigmoid(step.switch_logit));
}

double log_sigmoid_value(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

void require_reference(const MixtureStep& step, const char* who) {
  if (!step.has_reference()) {
    throw std::invalid_argument(std::string(who) +
                                ": step has no switch (vocab-only model)");
  }
}

}  // namespace

Tensor token_nll_supervised(const MixtureStep& step, std::size_t target, bool z,
                            std::span<const std::size_t> candidates) {
  require_reference(step, "token_nll_supervised");
  if (z) {
    if (candidates.empty()) {
      throw std::invalid_argument(
          "token_nll_supervised: z=1 label with no copy candidates");
    }
    return scale(copy_branch(step, candidates), -1.0);
  }
  return scale(vocab_branch(step, target), -1.0);
}

Tensor token_nll_latent(const MixtureStep& step, std::size_t target,
                        std::span<const std::size_t> candidates) {
  require_reference(step, "token_nll_latent");
  if (candidates.empty()) return scale(vocab_branch(step, target), -1.0);
  return scale(logsumexp(concat({vocab_branch(step, target),
                                 copy_branch(step, candidates)})),
               -1.0);
}

Tensor token_nll_vocab(const MixtureStep& step, std::size_t target) {
  return scale(select(step.vocab_log_probs, target), -1.0);
}

Tensor token_nll(const MixtureStep& step, std::size_t target, bool z,
                 std::span<const std::size_t> candidates, TrainingMode mode) {
  if (!step.has_reference()) return token_nll_vocab(step, target);
  if (mode == TrainingMode::kSupervised) {
    return token_nll_supervised(step, target, z, candidates);
  }
  return token_nll_latent(step, target, candidates);
}

double token_log_prob(const MixtureStep& step, std::size_t target,
                      std::span<const std::size_t> candidates) {
  const double log_vocab = step.vocab_log_probs[target];
  if (!step.has_reference()) return log_vocab;
  const double a = step.switch_logit.item();
  const double vocab = log_vocab + log_sigmoid_value(-a);
  double copy_mass = 0.0;
  for (std::size_t c : candidates) copy_mass += step.copy_probs[c];
  if (copy_mass <= 0.0) return vocab;
  const double copy = std::log(copy_mass) + log_sigmoid_value(a);
  const double hi = std::max(vocab, copy);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log(std::exp(vocab - hi) + std::exp(copy - hi));
}

}  // namespace reflm
