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

#ifndef REFLM_CORPUS_DIALOGUE_H_
#define REFLM_CORPUS_DIALOGUE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflm/corpus/recipes.h"
#include "reflm/corpus/vocab.h"
#include "reflm/models/table_model.h"

namespace reflm {

// CSV table as read from disk: header row of attribute names, first column
// holding the restaurant name.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const RawTable&, const RawTable&) = default;
};

struct RawTurn {
  Speaker speaker = Speaker::kMachine;
  std::string text;
  friend bool operator==(const RawTurn&, const RawTurn&) = default;
};

struct RawDialogue {
  std::vector<RawTurn> turns;
  friend bool operator==(const RawDialogue&, const RawDialogue&) = default;
};

RawTable read_table_csv(const std::string& path);
void write_table_csv(const std::string& path, const RawTable& table);

// {"turns": [{"speaker": "M"|"U", "text": string}, ...]} per line.
std::vector<RawDialogue> read_dialogue_jsonl(const std::string& path,
                                             LoadReport* report = nullptr);
void write_dialogue_jsonl(const std::string& path,
                          const std::vector<RawDialogue>& dialogues);

// Token-sequence replacements derived from the table, longest pattern first.
class TableSubstitution {
 public:
  void add(std::vector<std::string> pattern, std::string replacement);
  // Left to right; at each position the longest matching pattern wins and
  // matches never overlap.
  std::vector<std::string> apply(const std::vector<std::string>& tokens) const;
  const std::vector<std::pair<std::vector<std::string>, std::string>>& rules() const {
    return rules_;
  }

 private:
  std::vector<std::pair<std::vector<std::string>, std::string>> rules_;
};

struct PreparedTable {
  std::shared_ptr<DatabaseTable> table;  // ids unassigned
  TableSubstitution substitution;
};

// Collapses cells to single tokens. Columns named name, address/addr,
// postcode and phone get per-row tokens _NAME_j, _ADDR_j, _POSTCODE_j and
// _PHONE_j (j is the 1-based row); other multi-token cells are joined with
// '_'; empty cells become _EMPTY. Duplicate names are rejected.
PreparedTable prepare_table(const RawTable& raw);

// Tokenizes, substitutes and labels one dialogue. Throws on non-alternating
// turns or empty utterances.
DialogueExample make_dialogue_example(const RawDialogue& raw,
                                      const PreparedTable& table);

struct DialogueCorpus {
  std::vector<DialogueExample> examples;
  std::shared_ptr<DatabaseTable> table;
  Vocab vocab;
};

// Loads the table and dialogues, drops rejected dialogues (reported), builds
// the vocabulary and assigns ids. The vocabulary covers every table token
// plus transcript tokens of `vocab_examples` (all examples when unset).
DialogueCorpus load_dialogues(const std::string& dialogue_path,
                              const std::string& table_path,
                              const VocabOptions& vocab_options = {},
                              const std::optional<std::vector<std::size_t>>&
                                  vocab_examples = std::nullopt,
                              LoadReport* report = nullptr);

// Tokens of the table (attributes and cells), in table order.
std::vector<std::string> table_tokens(const DatabaseTable& table);

void assign_ids(DatabaseTable& table, const Vocab& vocab);
void assign_ids(DialogueExample& example, const Vocab& vocab);

}  // namespace reflm

#endif  // REFLM_CORPUS_DIALOGUE_H_
