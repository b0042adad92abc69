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

#include "reflm/harness/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace reflm {
namespace {

std::map<TokenSequence, std::size_t> ngrams(const TokenSequence& s, std::size_t n) {
  std::map<TokenSequence, std::size_t> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    ++out[TokenSequence(s.begin() + static_cast<long>(i),
                        s.begin() + static_cast<long>(i + n))];
  }
  return out;
}

}  // namespace

double corpus_bleu(const std::vector<TokenSequence>& candidates,
                   const std::vector<TokenSequence>& references) {
  if (candidates.empty() || candidates.size() != references.size()) {
    throw std::invalid_argument("BLEU needs aligned, non-empty corpora");
  }
  constexpr std::size_t kMaxOrder = 4;
  double matches[kMaxOrder] = {};
  double totals[kMaxOrder] = {};
  double cand_len = 0.0, ref_len = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    cand_len += static_cast<double>(candidates[k].size());
    ref_len += static_cast<double>(references[k].size());
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
      const auto cand = ngrams(candidates[k], n);
      const auto ref = ngrams(references[k], n);
      for (const auto& [gram, count] : cand) {
        totals[n - 1] += static_cast<double>(count);
        auto it = ref.find(gram);
        if (it != ref.end()) matches[n - 1] += static_cast<double>(std::min(count, it->second));
      }
    }
  }
  if (cand_len == 0.0) return 0.0;
  double log_precision = 0.0;
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    if (matches[n] == 0.0) return 0.0;
    log_precision += std::log(matches[n] / totals[n]) / kMaxOrder;
  }
  const double brevity = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return brevity * std::exp(log_precision);
}

}  // namespace reflm
