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

#ifndef REFLM_HARNESS_TRAINER_H_
#define REFLM_HARNESS_TRAINER_H_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflm/harness/config.h"
#include "reflm/numcore/parameters.h"

namespace reflm {

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_nll = 0.0;       // mean per training example
  double validation_nll = 0.0;  // total over the validation set
  bool improved = false;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_validation_nll = 0.0;
};

// Thrown when a batch loss is NaN or infinite.
class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(std::size_t epoch, std::size_t batch, double value);
  std::size_t epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

struct TrainProblem {
  std::size_t train_size = 0;
  // Builds the NLL graph of training example i (0-based within the train
  // set) on the active tape.
  std::function<Tensor(std::size_t)> loss;
  // Total validation NLL under the current parameters; evaluated without
  // recording.
  std::function<double()> validation_nll;
};

// SGD over shuffled mini-batches: the batch loss is the mean example NLL,
// gradients are clipped to `clip_norm` in global L2 norm, and parameters move
// by -learning_rate * g. After every epoch the validation NLL is measured;
// the best parameters are retained and restored at the end, and the rate is
// multiplied by lr_decay when validation does not improve.
TrainResult train_parameters(ParameterSet& params, const TrainProblem& problem,
                             const TrainConfig& config,
                             const std::function<void(const EpochLog&)>& on_epoch = {});

// One clipped SGD update from the gradients currently stored on `params`.
// Returns the pre-clipping global gradient norm.
double sgd_update(ParameterSet& params, double learning_rate, double clip_norm);

std::string format_train_log(const TrainResult& result);

}  // namespace reflm

#endif  // REFLM_HARNESS_TRAINER_H_
