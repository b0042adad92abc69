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

#ifndef REFLM_CORPUS_SYNTHETIC_H_
#define REFLM_CORPUS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "reflm/corpus/coref_docs.h"
#include "reflm/corpus/dialogue.h"
#include "reflm/corpus/recipes.h"
#include "reflm/corpus/splits.h"

namespace reflm {

struct SyntheticRecipeOptions {
  std::size_t count = 500;
  std::size_t name_pool = 40;
  // The last `held_out_names` names of the pool only appear in test recipes.
  std::size_t held_out_names = 10;
  std::size_t min_ingredients = 2;
  std::size_t max_ingredients = 4;
};

struct SyntheticRecipes {
  std::vector<RawRecipe> recipes;
  SplitIndices split;
  std::vector<std::string> held_out_names;
};

// "<qty> <unit> <name>" ingredient lines; one "<verb> the <unit> of <name> ."
// instruction per ingredient in order, plus a spurious "prepare a cup of
// water ." line. Every tenth recipe is a test recipe containing at least one
// held-out name.
SyntheticRecipes synthesize_recipes(std::uint64_t seed,
                                    const SyntheticRecipeOptions& options = {});

struct SyntheticDialogueOptions {
  std::size_t rows = 10;
  // Phone, address and postcode cells that training dialogues never ask
  // about; only fold-0 dialogues mention them.
  std::size_t held_out_cells = 14;
  std::size_t dialogues_per_row = 24;
  // Fold-0 dialogues per row that ask about its held-out cells.
  std::size_t held_out_dialogues_per_row = 4;
  std::size_t fold_count = 5;
};

struct HeldOutCell {
  std::size_t row = 0;  // 0-based
  std::size_t column = 0;
  friend bool operator==(const HeldOutCell&, const HeldOutCell&) = default;
};

struct SyntheticDialogues {
  RawTable table;
  std::vector<RawDialogue> dialogues;
  std::vector<std::size_t> folds;
  std::vector<HeldOutCell> held_out_cells;
};

SyntheticDialogues synthesize_dialogues(std::uint64_t seed,
                                        const SyntheticDialogueOptions& options = {});

struct SyntheticCorefOptions {
  std::size_t count = 300;
  std::size_t name_pool = 150;
  std::size_t min_entities = 2;
  std::size_t max_entities = 3;
  std::size_t min_sentences = 6;
  std::size_t max_sentences = 9;
};

struct SyntheticCoref {
  std::vector<RawCorefDoc> documents;
  SplitIndices split;
};

// Entities are introduced as "mr <name>" or "ms <name>" and later realized
// as the bare name or a pronoun. Each document also holds one singleton
// mention.
SyntheticCoref synthesize_coref(std::uint64_t seed,
                                const SyntheticCorefOptions& options = {});

struct SyntheticOptions {
  SyntheticRecipeOptions recipes;
  SyntheticDialogueOptions dialogue;
  SyntheticCorefOptions coref;
};

// Writes the corpus files and manifest.json into `dir` (created if needed).
Manifest write_synthetic(TaskKind task, const std::string& dir, std::uint64_t seed,
                         const SyntheticOptions& options = {});

}  // namespace reflm

#endif  // REFLM_CORPUS_SYNTHETIC_H_
