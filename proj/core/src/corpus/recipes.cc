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

#include "reflm/corpus/recipes.h"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "reflm/corpus/tokenizer.h"

namespace reflm {

using nlohmann::json;

namespace {

void warn(LoadReport* report, std::string message) {
  if (report != nullptr) report->warnings.push_back(std::move(message));
}

}  // namespace

std::vector<RawRecipe> read_recipe_jsonl(const std::string& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read recipe file " + path);
  std::vector<RawRecipe> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (report != nullptr) ++report->lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      RawRecipe r;
      r.ingredients = obj.at("ingredients").get<std::vector<std::string>>();
      r.recipe = obj.at("recipe").get<std::string>();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      if (report != nullptr) ++report->skipped_lines;
      warn(report, path + ":" + std::to_string(line_no) + ": malformed recipe: " +
                       e.what());
    }
  }
  return out;
}

void write_recipe_jsonl(const std::string& path, const std::vector<RawRecipe>& recipes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write recipe file " + path);
  for (const auto& r : recipes) {
    json obj;
    obj["ingredients"] = r.ingredients;
    obj["recipe"] = r.recipe;
    out << obj.dump() << '\n';
  }
}

RecipeExample make_recipe_example(const RawRecipe& raw) {
  RecipeExample ex;
  for (const auto& line : raw.ingredients) {
    auto toks = tokenize(line);
    if (!toks.empty()) ex.ingredient_tokens.push_back(std::move(toks));
  }
  ex.recipe_tokens = tokenize(raw.recipe);
  ex.copy_candidates.resize(ex.recipe_tokens.size());
  ex.copy_labels.resize(ex.recipe_tokens.size(), 0);
  for (std::size_t v = 0; v < ex.recipe_tokens.size(); ++v) {
    for (std::size_t i = 0; i < ex.ingredient_tokens.size(); ++i) {
      for (std::size_t j = 0; j < ex.ingredient_tokens[i].size(); ++j) {
        if (ex.ingredient_tokens[i][j] == ex.recipe_tokens[v]) {
          ex.copy_candidates[v].push_back({i, j});
        }
      }
    }
    ex.copy_labels[v] = ex.copy_candidates[v].empty() ? 0 : 1;
  }
  return ex;
}

std::vector<RecipeExample> load_recipes(const std::string& path, LoadReport* report) {
  std::vector<RecipeExample> out;
  std::size_t index = 0;
  for (const auto& raw : read_recipe_jsonl(path, report)) {
    RecipeExample ex = make_recipe_example(raw);
    const std::size_t n = ex.recipe_tokens.size();
    if (ex.ingredient_tokens.empty()) {
      if (report != nullptr) ++report->dropped_examples;
      warn(report, "recipe " + std::to_string(index) + ": no ingredients, dropped");
    } else if (n < kMinRecipeTokens || n > kMaxRecipeTokens) {
      if (report != nullptr) ++report->dropped_examples;
    } else {
      out.push_back(std::move(ex));
    }
    ++index;
  }
  return out;
}

void assign_ids(RecipeExample& example, const Vocab& vocab) {
  example.ingredients.clear();
  for (const auto& toks : example.ingredient_tokens) {
    example.ingredients.push_back(vocab.encode(toks));
  }
  example.recipe = vocab.encode(example.recipe_tokens);
}

}  // namespace reflm
