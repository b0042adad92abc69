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

#ifndef REFLM_NUMCORE_GRAD_CHECK_H_
#define REFLM_NUMCORE_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reflm/numcore/tensor.h"

namespace reflm {

struct GradCheckReport {
  bool passed = false;
  double max_relative_error = 0.0;
  // Coordinate that produced the maximum (or the first non-finite value).
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
  // Set when f evaluated to NaN/Inf at some coordinate.
  std::optional<std::string> failure;
};

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-6;
  // Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double denominator_floor = 1e-6;
  // Check at most this many coordinates per parameter (0 = all). Chosen
  // deterministically with a fixed stride.
  std::size_t max_coordinates_per_param = 0;
};

// Compares reverse-mode gradients of the scalar `f` with central finite
// differences. `f` must rebuild its graph from `params` on every call; it is
// invoked once under a fresh record and then repeatedly with recording off.
GradCheckReport grad_check(const std::function<Tensor()>& f,
                           std::vector<Tensor> params,
                           const GradCheckOptions& options = {});

}  // namespace reflm

#endif  // REFLM_NUMCORE_GRAD_CHECK_H_
