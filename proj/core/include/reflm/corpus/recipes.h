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

#ifndef REFLM_CORPUS_RECIPES_H_
#define REFLM_CORPUS_RECIPES_H_

#include <cstddef>
#include <string>
#include <vector>

#include "reflm/corpus/vocab.h"
#include "reflm/models/recipe_model.h"

namespace reflm {

// Diagnostics collected while reading a corpus file.
struct LoadReport {
  std::size_t lines = 0;
  std::size_t skipped_lines = 0;
  std::size_t dropped_examples = 0;
  std::vector<std::string> warnings;
};

struct RawRecipe {
  std::vector<std::string> ingredients;
  std::string recipe;
  friend bool operator==(const RawRecipe&, const RawRecipe&) = default;
};

inline constexpr std::size_t kMinRecipeTokens = 10;
inline constexpr std::size_t kMaxRecipeTokens = 500;

// {"ingredients": [string, ...], "recipe": string} per line. Malformed lines
// are skipped and reported with their line number.
std::vector<RawRecipe> read_recipe_jsonl(const std::string& path,
                                         LoadReport* report = nullptr);
void write_recipe_jsonl(const std::string& path, const std::vector<RawRecipe>& recipes);

// Tokenizes and string-matches one recipe. Ids are left empty.
RecipeExample make_recipe_example(const RawRecipe& raw);

// Reads, tokenizes and labels recipes. Recipes outside [10, 500] tokens and
// recipes without ingredients are dropped. Ids are left empty; see
// assign_ids.
std::vector<RecipeExample> load_recipes(const std::string& path,
                                        LoadReport* report = nullptr);

void assign_ids(RecipeExample& example, const Vocab& vocab);

}  // namespace reflm

#endif  // REFLM_CORPUS_RECIPES_H_
