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

#include "reflm/numcore/grad_check.h"

#include <algorithm>
#include <cmath>

namespace reflm {

GradCheckReport grad_check(const std::function<Tensor()>& f,
                           std::vector<Tensor> params,
                           const GradCheckOptions& options) {
  GradCheckReport report;

  std::vector<bool> saved_flags;
  for (Tensor& p : params) {
    saved_flags.push_back(p.requires_grad());
    p.set_requires_grad(true);
    p.zero_grad();
  }

  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    TapeScope scope(tape);
    Tensor loss = f();
    if (!std::isfinite(loss.item())) {
      report.failure = "f is not finite at the base point";
      for (std::size_t i = 0; i < params.size(); ++i) {
        params[i].set_requires_grad(saved_flags[i]);
      }
      return report;
    }
    tape.backward(loss);
  }
  for (Tensor& p : params) analytic.push_back(p.grad());

  NoRecordScope no_record;
  double worst = 0.0;
  bool ok = true;
  for (std::size_t pi = 0; pi < params.size() && ok; ++pi) {
    Tensor& p = params[pi];
    const std::size_t n = p.size();
    std::size_t stride = 1;
    if (options.max_coordinates_per_param > 0 &&
        n > options.max_coordinates_per_param) {
      stride = (n + options.max_coordinates_per_param - 1) /
               options.max_coordinates_per_param;
    }
    for (std::size_t i = 0; i < n; i += stride) {
      auto data = p.mutable_data();
      const double original = data[i];
      data[i] = original + options.step;
      const double up = f().item();
      data[i] = original - options.step;
      const double down = f().item();
      data[i] = original;
      ++report.coordinates_checked;

      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[pi][i];
      if (!std::isfinite(up) || !std::isfinite(down)) {
        report.failure = "f is not finite at parameter " + std::to_string(pi) +
                         " coordinate " + std::to_string(i);
        report.worst_param = pi;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
        ok = false;
        break;
      }
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
      const double rel = std::abs(a - numeric) / denom;
      if (rel > worst || report.coordinates_checked == 1) {
        worst = std::max(worst, rel);
        report.worst_param = pi;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i].zero_grad();
    params[i].set_requires_grad(saved_flags[i]);
  }
  report.max_relative_error = worst;
  report.passed = ok && worst < options.tolerance;
  return report;
}

}  // namespace reflm
