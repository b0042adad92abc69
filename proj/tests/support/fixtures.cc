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

#include "support/fixtures.h"

#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "reflm/corpus/tokenizer.h"

namespace reflm::testing {

RecipeFixture tiny_recipe() {
  RawRecipe raw;
  raw.ingredients = {"2 cups flour", "3 eggs", "1 pinch salt"};
  raw.recipe = "mix the flour and eggs , add salt then bake .";
  RecipeFixture f;
  f.example = make_recipe_example(raw);
  std::vector<std::vector<std::string>> streams = f.example.ingredient_tokens;
  streams.push_back(f.example.recipe_tokens);
  f.vocab = build_vocab(streams);
  assign_ids(f.example, f.vocab);
  return f;
}

DialogueFixture tiny_dialogue() {
  RawTable raw;
  raw.header = {"name", "food", "area"};
  raw.rows = {{"the nirala", "indian", "north"},
              {"kymmoy", "asian oriental", ""},
              {"golden wok", "chinese", "north"}};
  RawDialogue dialogue;
  dialogue.turns = {{Speaker::kMachine, "hello , how can i help ?"},
                    {Speaker::kUser, "i want indian food in the north"},
                    {Speaker::kMachine, "the nirala serves indian food in the north ."},
                    {Speaker::kUser, "what about chinese ?"},
                    {Speaker::kMachine, "golden wok is in the north ."}};
  DialogueFixture f;
  f.prepared = prepare_table(raw);
  DialogueExample unlabelled = make_dialogue_example(dialogue, f.prepared);
  std::vector<std::vector<std::string>> streams;
  for (const Utterance& u : unlabelled.turns) streams.push_back(u.tokens);
  VocabOptions options;
  options.forced = table_tokens(*f.prepared.table);
  f.vocab = build_vocab(streams, options);
  assign_ids(*f.prepared.table, f.vocab);
  f.example = make_dialogue_example(dialogue, f.prepared);
  assign_ids(f.example, f.vocab);
  return f;
}

DocumentFixture tiny_document() {
  RawCorefDoc raw;
  raw.tokens = tokenize("Mr Smith met Jones . Smith said he was late . Jones left .");
  raw.mentions = {{1, 2, 4}, {3, 4, 9}, {5, 6, 4}, {7, 8, 4}, {11, 12, 9}};
  DocumentFixture f;
  f.doc = preprocess_coref(raw);
  f.vocab = build_vocab({f.doc.tokens});
  assign_ids(f.doc, f.vocab);
  return f;
}

RecipeExample minimal_recipe() {
  RecipeExample ex;
  ex.ingredient_tokens = {{"t4", "t5"}, {"t6"}};
  ex.ingredients = {{4, 5}, {6}};
  ex.recipe_tokens = {"t5", "t7", "t6"};
  ex.recipe = {5, 7, 6};
  ex.copy_candidates = {{{0, 1}}, {}, {{1, 0}}};
  ex.copy_labels = {1, 0, 1};
  ex.validate();
  return ex;
}

DialogueExample minimal_dialogue() {
  auto table = std::make_shared<DatabaseTable>();
  table->attribute_tokens = {"t4", "t5", "t6"};
  table->attributes = {4, 5, 6};
  table->cell_tokens = {{"t7", "t8", "t9"}, {"t10", "t8", "t11"}};
  table->cells = {{7, 8, 9}, {10, 8, 11}};
  table->validate();

  DialogueExample ex;
  ex.table = table;
  Utterance m1;
  m1.speaker = Speaker::kMachine;
  m1.tokens = {"t12", "t7"};
  m1.ids = {12, 7};
  m1.cell_candidates = {{}, {0}};
  m1.copy_labels = {0, 1};
  Utterance u1;
  u1.speaker = Speaker::kUser;
  u1.tokens = {"t13", "t8"};
  u1.ids = {13, 8};
  Utterance m2;
  m2.speaker = Speaker::kMachine;
  m2.tokens = {"t8", "t14", "t11"};
  m2.ids = {8, 14, 11};
  m2.cell_candidates = {{1, 4}, {}, {5}};
  m2.copy_labels = {1, 0, 1};
  ex.turns = {m1, u1, m2};
  ex.validate();
  return ex;
}

AnnotatedDocument minimal_document() {
  AnnotatedDocument doc;
  doc.tokens = {"t4", "t5", "t6", "t5", "t7"};
  doc.ids = {4, 5, 6, 5, 7};
  doc.mentions = {std::nullopt, 1, std::nullopt, 1, std::nullopt};
  doc.validate();
  return doc;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("reflm_" + tag + "_" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace reflm::testing
