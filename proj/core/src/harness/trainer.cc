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

#include "reflm/harness/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <limits>
#include <random>

#include "reflm/numcore/ops.h"

namespace reflm {

NonFiniteLoss::NonFiniteLoss(std::size_t epoch, std::size_t batch, double value)
    : std::runtime_error("non-finite loss " + std::to_string(value) + " at epoch " +
                         std::to_string(epoch) + ", batch " + std::to_string(batch)),
      epoch_(epoch),
      batch_(batch) {}

double sgd_update(ParameterSet& params, double learning_rate, double clip_norm) {
  const double norm = params.grad_norm();
  double step = learning_rate;
  if (norm > clip_norm) step = learning_rate * (clip_norm / norm);
  for (const auto& [name, t] : params.entries()) {
    if (!t.has_grad()) continue;
    Tensor p = t;
    auto data = p.mutable_data();
    const auto& grad = p.node()->grad;
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= step * grad[i];
  }
  return norm;
}

TrainResult train_parameters(ParameterSet& params, const TrainProblem& problem,
                             const TrainConfig& config,
                             const std::function<void(const EpochLog&)>& on_epoch) {
  config.validate();
  if (problem.train_size == 0) throw std::invalid_argument("empty training set");
  TrainResult result;
  double lr = config.learning_rate;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_values = params.snapshot();

  std::vector<std::size_t> order(problem.train_size);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batch = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      params.zero_grads();
      Tape tape;
      double value = 0.0;
      {
        TapeScope scope(tape);
        std::vector<Tensor> losses;
        for (std::size_t i = start; i < end; ++i) losses.push_back(problem.loss(order[i]));
        Tensor loss = losses.size() == 1
                          ? losses.front()
                          : scale(sum(concat(losses)), 1.0 / static_cast<double>(losses.size()));
        value = loss.item();
        if (!std::isfinite(value)) throw NonFiniteLoss(epoch, batch, value);
        tape.backward(loss);
      }
      total += value * static_cast<double>(end - start);
      sgd_update(params, lr, config.clip_norm);
    }

    EpochLog log;
    log.epoch = epoch;
    log.learning_rate = lr;
    log.train_nll = total / static_cast<double>(order.size());
    log.validation_nll = problem.validation_nll ? problem.validation_nll() : log.train_nll;
    if (!std::isfinite(log.validation_nll)) {
      throw std::runtime_error("validation NLL is not finite after epoch " +
                               std::to_string(epoch));
    }
    log.improved = log.validation_nll < best;
    if (log.improved) {
      best = log.validation_nll;
      best_values = params.snapshot();
      result.best_epoch = epoch;
      result.best_validation_nll = best;
    } else {
      lr *= config.lr_decay;
    }
    result.epochs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  if (result.best_epoch != 0) params.restore(best_values);
  return result;
}

std::string format_train_log(const TrainResult& result) {
  std::string out = "epoch\tlearning_rate\ttrain_nll\tvalidation_nll\timproved\n";
  char buf[160];
  for (const auto& e : result.epochs) {
    std::snprintf(buf, sizeof(buf), "%zu\t%.17g\t%.17g\t%.17g\t%d\n", e.epoch,
                  e.learning_rate, e.train_nll, e.validation_nll, e.improved ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace reflm
