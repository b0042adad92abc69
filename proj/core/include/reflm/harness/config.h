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

#ifndef REFLM_HARNESS_CONFIG_H_
#define REFLM_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "reflm/corpus/splits.h"
#include "reflm/models/mixture.h"

namespace reflm {

struct TrainConfig {
  TaskKind task = TaskKind::kRecipes;
  std::size_t hidden_dim = 64;
  std::size_t embed_dim = 32;
  std::size_t attention_dim = 32;
  double learning_rate = 0.5;
  // Multiplies the learning rate after an epoch that does not improve the
  // validation NLL.
  double lr_decay = 0.5;
  double clip_norm = 5.0;
  std::size_t epochs = 10;
  std::size_t batch_size = 1;
  std::uint64_t seed = 1;
  TrainingMode mode = TrainingMode::kSupervised;
  bool sentence_attention = false;
  // false trains the task's baseline without the reference mechanism.
  bool use_reference = true;
  std::string init_checkpoint;
  // 0 keeps every training token.
  std::size_t max_vocab = 0;
  std::size_t min_count = 1;
  // Cross-validation fold used as the test set when the corpus has folds.
  std::size_t fold = 0;
  // Worker threads for evaluation.
  std::size_t threads = 1;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

std::string config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const std::string& text);

// Identifier of the source revision the library was built from.
const char* build_id();

}  // namespace reflm

#endif  // REFLM_HARNESS_CONFIG_H_
