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

#ifndef REFLM_CORPUS_COREF_DOCS_H_
#define REFLM_CORPUS_COREF_DOCS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "reflm/corpus/recipes.h"
#include "reflm/corpus/vocab.h"
#include "reflm/models/coref_model.h"

namespace reflm {

struct RawMention {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  long entity = 0;
  friend bool operator==(const RawMention&, const RawMention&) = default;
};

struct RawCorefDoc {
  std::vector<std::string> tokens;
  std::vector<RawMention> mentions;
  friend bool operator==(const RawCorefDoc&, const RawCorefDoc&) = default;
};

// {"tokens": [string, ...], "mentions": [{"start", "end", "entity"}, ...]}.
std::vector<RawCorefDoc> read_coref_jsonl(const std::string& path,
                                          LoadReport* report = nullptr);
void write_coref_jsonl(const std::string& path, const std::vector<RawCorefDoc>& docs);

// Lowercases tokens, drops entities with a single mention, collapses every
// mention to the entity's most frequent mention token (ties to the
// lexicographically smallest) and renumbers entities 1..N by first mention.
// Throws on overlapping or out-of-range spans. Ids are left empty.
AnnotatedDocument preprocess_coref(const RawCorefDoc& raw);

// Reads and preprocesses documents; rejected documents are reported and
// skipped.
std::vector<AnnotatedDocument> load_coref_docs(const std::string& path,
                                               LoadReport* report = nullptr);

void assign_ids(AnnotatedDocument& doc, const Vocab& vocab);

}  // namespace reflm

#endif  // REFLM_CORPUS_COREF_DOCS_H_
