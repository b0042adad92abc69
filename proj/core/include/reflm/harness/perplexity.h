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

#ifndef REFLM_HARNESS_PERPLEXITY_H_
#define REFLM_HARNESS_PERPLEXITY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace reflm {

// Log probability of one scored token with its class membership.
struct TokenScore {
  double log_prob = 0.0;
  bool reference = false;  // copyable / table cell / entity mention
  bool oov = false;        // surface unseen in the training split
};

struct ClassPerplexity {
  std::size_t count = 0;
  double total_log_prob = 0.0;
  // exp(-total / count); absent when the class is empty.
  std::optional<double> perplexity;
};

// Reference and Word partition All; Reference-OOV is the subset of
// Reference whose surface was not seen in training.
struct PerplexityReport {
  ClassPerplexity all;
  ClassPerplexity reference;
  ClassPerplexity word;
  ClassPerplexity reference_oov;
};

PerplexityReport perplexity_report(const std::vector<TokenScore>& scores);

// JSON object with one entry per class: {"count", "perplexity"} where an
// empty class has a null perplexity.
std::string perplexity_json(const PerplexityReport& report, int indent = -1);

}  // namespace reflm

#endif  // REFLM_HARNESS_PERPLEXITY_H_
