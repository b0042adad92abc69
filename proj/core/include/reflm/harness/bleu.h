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

#ifndef REFLM_HARNESS_BLEU_H_
#define REFLM_HARNESS_BLEU_H_

#include <string>
#include <vector>

namespace reflm {

using TokenSequence = std::vector<std::string>;

// Corpus-level BLEU-4 against one reference per candidate: clipped n-gram
// precisions for n = 1..4 pooled over the corpus, uniform geometric mean,
// brevity penalty exp(1 - r/c) when c <= r. Any zero precision gives 0.
double corpus_bleu(const std::vector<TokenSequence>& candidates,
                   const std::vector<TokenSequence>& references);

}  // namespace reflm

#endif  // REFLM_HARNESS_BLEU_H_
