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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "reflm/corpus/coref_docs.h"
#include "reflm/corpus/dialogue.h"
#include "reflm/corpus/recipes.h"
#include "reflm/corpus/splits.h"
#include "reflm/corpus/synthetic.h"
#include "reflm/corpus/tokenizer.h"
#include "reflm/corpus/vocab.h"
#include "support/fixtures.h"

namespace reflm {
namespace {

using testing::read_file;
using testing::TempDir;
using Tokens = std::vector<std::string>;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// ---------------------------------------------------------------------------
// Tokenizer.

TEST(Tokenizer, SplitsPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("1 large Banana, sliced."),
            (Tokens{"1", "large", "banana", ",", "sliced", "."}));
  EXPECT_EQ(tokenize("  \t\n"), Tokens{});
  EXPECT_EQ(tokenize("_ADDR_3"), Tokens{"_addr_3"});
}

TEST(Tokenizer, NormalizeKeepsOneToken) {
  EXPECT_EQ(normalize_token("New York"), "new_york");
  EXPECT_EQ(join_tokens({"a", "b"}, "_"), "a_b");
}

// ---------------------------------------------------------------------------
// Vocabulary.

TEST(Vocab, KeepsMostFrequentUpToCap) {
  const std::vector<Tokens> streams = {{"a", "b", "a", "c"}, {"b", "a"}};
  VocabOptions opts;
  opts.max_size = 2 + Vocab::reserved().size();
  Vocab v = build_vocab(streams, opts);
  EXPECT_EQ(v.size(), opts.max_size);
  EXPECT_TRUE(v.contains("a"));
  EXPECT_TRUE(v.contains("b"));
  EXPECT_FALSE(v.contains("c"));
  EXPECT_EQ(v.id("c"), Vocab::kUnk);
  EXPECT_EQ(v.id("never seen"), Vocab::kUnk);
}

TEST(Vocab, ReservedTokensComeFirstExactlyOnce) {
  Vocab v = build_vocab({{Vocab::reserved()[Vocab::kUnk], "x", Vocab::reserved()[Vocab::kEos]}});
  for (std::size_t i = 0; i < Vocab::reserved().size(); ++i) {
    EXPECT_EQ(v.token(i), Vocab::reserved()[i]);
    EXPECT_EQ(std::count(v.tokens().begin(), v.tokens().end(), Vocab::reserved()[i]), 1);
  }
  EXPECT_EQ(v.size(), Vocab::reserved().size() + 1);
}

TEST(Vocab, TiesBrokenLexicographically) {
  VocabOptions opts;
  opts.max_size = Vocab::reserved().size() + 2;
  Vocab v = build_vocab({{"z", "y", "x", "w"}}, opts);
  EXPECT_EQ(v.token(Vocab::reserved().size()), "w");
  EXPECT_EQ(v.token(Vocab::reserved().size() + 1), "x");
}

TEST(Vocab, ForcedTokensAndMinCount) {
  VocabOptions opts;
  opts.forced = {"_NAME_1"};
  opts.min_count = 2;
  Vocab v = build_vocab({{"a", "a", "b"}}, opts);
  EXPECT_EQ(v.id("_NAME_1"), Vocab::reserved().size());
  EXPECT_TRUE(v.contains("a"));
  EXPECT_FALSE(v.contains("b"));
}

TEST(Vocab, CapMustExceedReserved) {
  VocabOptions opts;
  opts.max_size = Vocab::reserved().size();
  EXPECT_THROW(build_vocab({{"a"}}, opts), std::invalid_argument);
}

TEST(Vocab, RebuildIsByteIdenticalAndRoundTrips) {
  const std::vector<Tokens> streams = {{"the", "cat", "sat", "on", "the", "mat", "."}};
  Vocab a = build_vocab(streams);
  Vocab b = build_vocab(streams);
  EXPECT_EQ(a.serialize(), b.serialize());
  TempDir dir("vocab");
  a.save(dir.file("v.txt"));
  Vocab c = Vocab::load(dir.file("v.txt"));
  EXPECT_EQ(a, c);
  for (const auto& t : a.tokens()) EXPECT_EQ(a.id(t), c.id(t));
  EXPECT_EQ(c.decode(c.encode({"cat", "dog"})), (Tokens{"cat", Vocab::reserved()[0]}));
}

TEST(Vocab, DuplicateOrMissingReservedRejected) {
  EXPECT_THROW(Vocab::from_tokens({"a", "b"}), std::invalid_argument);
  std::vector<std::string> dup(Vocab::reserved().begin(), Vocab::reserved().end());
  dup.push_back("x");
  dup.push_back("x");
  EXPECT_THROW(Vocab::from_tokens(dup), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Recipes.

TEST(Recipes, BananaIsCopiedFromItsIngredient) {
  RawRecipe raw{{"1 cup plain soy milk", "1 large banana, sliced"},
                "blend the banana with the milk until smooth and serve ."};
  RecipeExample ex = make_recipe_example(raw);
  const auto it = std::find(ex.recipe_tokens.begin(), ex.recipe_tokens.end(), "banana");
  const auto v = static_cast<std::size_t>(it - ex.recipe_tokens.begin());
  EXPECT_EQ(ex.copy_labels[v], 1);
  ASSERT_EQ(ex.copy_candidates[v].size(), 1u);
  EXPECT_EQ(ex.copy_candidates[v][0], (TokenPosition{1, 2}));
  EXPECT_EQ(ex.ingredient_tokens[1][2], "banana");
}

TEST(Recipes, SpuriousCupMatchIsKept) {
  RawRecipe raw{{"1 cup plain soy milk"}, "pour a cup of water"};
  RecipeExample ex = make_recipe_example(raw);
  EXPECT_EQ(ex.recipe_tokens[2], "cup");
  EXPECT_EQ(ex.copy_labels[2], 1);
  EXPECT_EQ(ex.copy_candidates[2], (std::vector<TokenPosition>{{0, 1}}));
  EXPECT_EQ(ex.copy_labels[3], 0);
  EXPECT_TRUE(ex.copy_candidates[3].empty());
}

TEST(Recipes, MatchingIsExactOnLowercaseSurface) {
  RawRecipe raw{{"2 Eggs"}, "beat the EGGS ; egg whites apart"};
  RecipeExample ex = make_recipe_example(raw);
  EXPECT_EQ(ex.copy_labels, (std::vector<unsigned char>{0, 0, 1, 0, 0, 0, 0}));
}

TEST(Recipes, LengthFilterAndDroppedExamples) {
  TempDir dir("recipes");
  const std::vector<RawRecipe> recipes = {
      {{"salt"}, "one two three four five six seven eight nine"},
      {{"salt"}, "one two three four five six seven eight nine ten"},
      {{}, "one two three four five six seven eight nine ten eleven"},
  };
  write_recipe_jsonl(dir.file("r.jsonl"), recipes);
  LoadReport report;
  auto loaded = load_recipes(dir.file("r.jsonl"), &report);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].recipe_tokens.size(), kMinRecipeTokens);
  EXPECT_EQ(report.dropped_examples, 2u);
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(Recipes, MalformedLinesAreReportedAndSkipped) {
  TempDir dir("recipes");
  write_text(dir.file("r.jsonl"),
             "{\"ingredients\": [\"a\"], \"recipe\": \"x\"}\n"
             "{not json\n"
             "{\"ingredients\": \"a\", \"recipe\": \"x\"}\n"
             "\n"
             "{\"ingredients\": [\"b\"], \"recipe\": \"y\"}\n");
  LoadReport report;
  auto raw = read_recipe_jsonl(dir.file("r.jsonl"), &report);
  EXPECT_EQ(raw.size(), 2u);
  EXPECT_EQ(report.skipped_lines, 2u);
  ASSERT_EQ(report.warnings.size(), 2u);
  EXPECT_NE(report.warnings[0].find(":2:"), std::string::npos) << report.warnings[0];
  EXPECT_NE(report.warnings[1].find(":3:"), std::string::npos) << report.warnings[1];
}

TEST(Recipes, JsonlRoundTrip) {
  TempDir dir("recipes");
  const std::vector<RawRecipe> recipes = {{{"1 \"big\" onion", "2 cups rice"}, "cook\nrice ."},
                                          {{"ünïcode"}, "stir"}};
  write_recipe_jsonl(dir.file("r.jsonl"), recipes);
  EXPECT_EQ(read_recipe_jsonl(dir.file("r.jsonl")), recipes);
}

TEST(Recipes, AssignIdsUsesVocab) {
  testing::RecipeFixture f = testing::tiny_recipe();
  EXPECT_EQ(f.example.recipe.size(), f.example.recipe_tokens.size());
  for (std::size_t v = 0; v < f.example.recipe.size(); ++v) {
    EXPECT_EQ(f.vocab.token(f.example.recipe[v]), f.example.recipe_tokens[v]);
  }
  EXPECT_NO_THROW(f.example.validate());
}

// ---------------------------------------------------------------------------
// Dialogue tables and transcripts.

RawTable sample_table() {
  RawTable t;
  t.header = {"name", "food", "address", "phone"};
  t.rows = {{"kymmoy", "asian oriental", "52 Mill Road City Centre", "01223 311911"},
            {"the nirala", "indian", "7 Milton Road Chesterton", "01223 360966"},
            {"nirala house", "thai", "", "01223 000000"}};
  return t;
}

TEST(Dialogue, SpecialColumnsBecomePerRowTokens) {
  PreparedTable p = prepare_table(sample_table());
  const DatabaseTable& t = *p.table;
  EXPECT_EQ(t.attribute_tokens, (Tokens{"name", "food", "address", "phone"}));
  EXPECT_EQ(t.cell_tokens[1], (Tokens{"_NAME_2", "indian", "_ADDR_2", "_PHONE_2"}));
  EXPECT_EQ(t.cell_tokens[0][1], "asian_oriental");
  EXPECT_EQ(t.cell_tokens[2][2], Vocab::reserved()[Vocab::kEmpty]);
}

TEST(Dialogue, TranscriptPhrasesAreSubstituted) {
  PreparedTable p = prepare_table(sample_table());
  EXPECT_EQ(p.substitution.apply(tokenize("it is at 7 Milton Road Chesterton .")),
            (Tokens{"it", "is", "at", "_ADDR_2", "."}));
}

TEST(Dialogue, LongestMatchWins) {
  TableSubstitution sub;
  sub.add({"nirala"}, "SHORT");
  sub.add({"the", "nirala"}, "_NAME_2");
  EXPECT_EQ(sub.apply(tokenize("try the nirala , a nice place")),
            (Tokens{"try", "_NAME_2", ",", "a", "nice", "place"}));
  EXPECT_EQ(sub.apply(tokenize("nirala the")), (Tokens{"SHORT", "the"}));
}

TEST(Dialogue, OnlyTheNameSpanIsSubstituted) {
  PreparedTable p = prepare_table(sample_table());
  EXPECT_EQ(p.substitution.apply(tokenize("the nirala is lovely")),
            (Tokens{"_NAME_2", "is", "lovely"}));
  EXPECT_EQ(p.substitution.apply(tokenize("nirala house is lovely")),
            (Tokens{"_NAME_3", "is", "lovely"}));
}

TEST(Dialogue, SubstitutionIsIdempotent) {
  PreparedTable p = prepare_table(sample_table());
  for (const char* text : {"the nirala serves indian food at 7 milton road chesterton",
                           "call 01223 311911 or kymmoy", "nothing to see", ""}) {
    const Tokens once = p.substitution.apply(tokenize(text));
    EXPECT_EQ(p.substitution.apply(once), once) << text;
  }
}

TEST(Dialogue, DuplicateNamesRejected) {
  RawTable t = sample_table();
  t.rows[2][0] = "The Nirala";
  EXPECT_THROW(prepare_table(t), std::invalid_argument);
}

TEST(Dialogue, RaggedRowsRejected) {
  RawTable t = sample_table();
  t.rows[1].pop_back();
  EXPECT_THROW(prepare_table(t), std::invalid_argument);
}

TEST(Dialogue, CopyLabelsMarkTableTokens) {
  PreparedTable p = prepare_table(sample_table());
  RawDialogue raw{{{Speaker::kMachine, "hello ."},
                   {Speaker::kUser, "indian food please"},
                   {Speaker::kMachine, "the nirala serves indian food ."}}};
  DialogueExample ex = make_dialogue_example(raw, p);
  const Utterance& m = ex.turns[2];
  EXPECT_EQ(m.tokens, (Tokens{"_NAME_2", "serves", "indian", "food", "."}));
  EXPECT_EQ(m.copy_labels, (std::vector<unsigned char>{1, 0, 1, 0, 0}));
  EXPECT_EQ(m.cell_candidates[0], (std::vector<std::size_t>{4}));
  EXPECT_EQ(m.cell_candidates[2], (std::vector<std::size_t>{5}));
  EXPECT_TRUE(ex.turns[1].copy_labels.empty());
}

TEST(Dialogue, NonAlternatingTurnsRejected) {
  PreparedTable p = prepare_table(sample_table());
  RawDialogue raw{{{Speaker::kMachine, "hello"}, {Speaker::kMachine, "again"}}};
  EXPECT_THROW(make_dialogue_example(raw, p), std::invalid_argument);
  RawDialogue user_first{{{Speaker::kUser, "hi"}}};
  EXPECT_THROW(make_dialogue_example(user_first, p), std::invalid_argument);
}

TEST(Dialogue, LoaderDropsRejectedDialogues) {
  TempDir dir("dialogue");
  write_table_csv(dir.file("t.csv"), sample_table());
  write_dialogue_jsonl(dir.file("d.jsonl"),
                       {{{{Speaker::kMachine, "hello"}, {Speaker::kUser, "kymmoy ?"}}},
                        {{{Speaker::kUser, "wrong order"}}}});
  LoadReport report;
  DialogueCorpus c = load_dialogues(dir.file("d.jsonl"), dir.file("t.csv"), {}, std::nullopt,
                                    &report);
  EXPECT_EQ(c.examples.size(), 1u);
  EXPECT_EQ(report.dropped_examples, 1u);
  // Every table token is in the vocabulary and ids are assigned.
  for (const auto& t : table_tokens(*c.table)) EXPECT_TRUE(c.vocab.contains(t)) << t;
  EXPECT_EQ(c.vocab.token(c.examples[0].turns[1].ids[0]), "_NAME_1");
  EXPECT_EQ(c.table->cells[0][0], c.vocab.id("_NAME_1"));
}

TEST(Dialogue, FilesRoundTrip) {
  TempDir dir("dialogue");
  RawTable t = sample_table();
  t.rows[0][1] = "asian, \"oriental\"";
  write_table_csv(dir.file("t.csv"), t);
  EXPECT_EQ(read_table_csv(dir.file("t.csv")), t);
  const std::vector<RawDialogue> d = {
      {{{Speaker::kMachine, "hi"}, {Speaker::kUser, "a \"quoted\" word"}}}};
  write_dialogue_jsonl(dir.file("d.jsonl"), d);
  EXPECT_EQ(read_dialogue_jsonl(dir.file("d.jsonl")), d);
}

TEST(Dialogue, FixtureIsConsistent) {
  testing::DialogueFixture f = testing::tiny_dialogue();
  EXPECT_NO_THROW(f.example.validate());
  EXPECT_EQ(f.example.table->rows(), 3u);
  EXPECT_EQ(f.example.table->cell_tokens[1][2], Vocab::reserved()[Vocab::kEmpty]);
}

// ---------------------------------------------------------------------------
// Coref documents.

RawCorefDoc linda_doc() {
  RawCorefDoc d;
  d.tokens = tokenize("Linda met Tom . She smiled . Later she left with Mary Ann .");
  d.mentions = {{0, 1, 7}, {2, 3, 5}, {4, 5, 7}, {8, 9, 7}, {11, 13, 3}};
  return d;
}

TEST(Coref, FrequentMentionTokenReplacesEveryMention) {
  AnnotatedDocument doc = preprocess_coref(linda_doc());
  EXPECT_EQ(doc.tokens[0], "she");
  EXPECT_EQ(doc.tokens[4], "she");
  EXPECT_EQ(doc.tokens[8], "she");
  EXPECT_EQ(doc.mentions[0], 1u);
  EXPECT_EQ(doc.mentions[4], 1u);
  EXPECT_EQ(doc.mentions[8], 1u);
}

TEST(Coref, SingletonEntitiesBecomePlainWords) {
  AnnotatedDocument doc = preprocess_coref(linda_doc());
  EXPECT_EQ(doc.tokens[2], "tom");
  EXPECT_FALSE(doc.mentions[2].has_value());
  // The two-token singleton keeps both tokens.
  EXPECT_EQ(doc.tokens.size(), 14u);
  EXPECT_EQ(doc.tokens[11], "mary");
  EXPECT_EQ(doc.tokens[12], "ann");
  EXPECT_EQ(doc.entity_count(), 1u);
}

TEST(Coref, EntityIdsRenumberedByFirstMention) {
  RawCorefDoc d;
  d.tokens = {"a", "b", "c", "d"};
  d.mentions = {{0, 1, 7}, {1, 2, 3}, {2, 3, 7}, {3, 4, 3}};
  AnnotatedDocument doc = preprocess_coref(d);
  EXPECT_EQ(doc.mentions[0], 1u);
  EXPECT_EQ(doc.mentions[1], 2u);
  EXPECT_EQ(doc.mentions[2], 1u);
  EXPECT_EQ(doc.mentions[3], 2u);
}

TEST(Coref, MultiTokenMentionsCollapseToOneToken) {
  RawCorefDoc d;
  d.tokens = tokenize("Mr Smith came . Mr Smith went . Smith slept .");
  d.mentions = {{0, 2, 1}, {4, 6, 1}, {8, 9, 1}};
  AnnotatedDocument doc = preprocess_coref(d);
  EXPECT_EQ(doc.tokens, (Tokens{"smith", "came", ".", "smith", "went", ".", "smith", "slept", "."}));
}

TEST(Coref, FrequencyTiesGoToSmallestToken) {
  RawCorefDoc d;
  d.tokens = {"zed", "x", "abe"};
  d.mentions = {{0, 1, 1}, {2, 3, 1}};
  AnnotatedDocument doc = preprocess_coref(d);
  EXPECT_EQ(doc.tokens[0], "abe");
  EXPECT_EQ(doc.tokens[2], "abe");
}

TEST(Coref, OverlappingSpansRejected) {
  RawCorefDoc d;
  d.tokens = {"a", "b", "c"};
  d.mentions = {{0, 2, 1}, {1, 3, 2}};
  EXPECT_THROW(preprocess_coref(d), std::invalid_argument);
  d.mentions = {{0, 4, 1}};
  EXPECT_THROW(preprocess_coref(d), std::invalid_argument);
}

TEST(Coref, PreprocessedEntitiesHaveTwoSingleTokenMentions) {
  SyntheticCoref syn = synthesize_coref(3);
  for (const auto& raw : syn.documents) {
    AnnotatedDocument doc = preprocess_coref(raw);
    ASSERT_EQ(doc.tokens.size(), doc.mentions.size());
    std::vector<std::size_t> count(doc.entity_count() + 1, 0);
    for (const auto& m : doc.mentions) {
      if (m) ++count.at(*m);
    }
    for (std::size_t k = 1; k < count.size(); ++k) EXPECT_GE(count[k], 2u);
    doc.ids.assign(doc.tokens.size(), Vocab::kUnk);
    EXPECT_NO_THROW(doc.validate());
  }
}

TEST(Coref, LoaderRejectsBadDocuments) {
  TempDir dir("coref");
  RawCorefDoc bad;
  bad.tokens = {"a", "b"};
  bad.mentions = {{0, 2, 1}, {1, 2, 1}};
  write_coref_jsonl(dir.file("c.jsonl"), {linda_doc(), bad});
  LoadReport report;
  auto docs = load_coref_docs(dir.file("c.jsonl"), &report);
  EXPECT_EQ(docs.size(), 1u);
  EXPECT_EQ(report.dropped_examples, 1u);
  EXPECT_EQ(read_coref_jsonl(dir.file("c.jsonl"))[0], linda_doc());
}

// ---------------------------------------------------------------------------
// Splits and manifests.

TEST(Splits, DisjointAndCoverEverything) {
  SplitIndices s = make_split(100, 5);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.validation.size(), 10u);
  EXPECT_EQ(s.test.size(), 10u);
  std::set<std::size_t> all;
  for (auto* part : {&s.train, &s.validation, &s.test}) all.insert(part->begin(), part->end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(make_split(100, 5), s);
  EXPECT_NE(make_split(100, 6), s);
}

TEST(Splits, FoldsPartitionExamples) {
  const std::size_t n = 53;
  const auto folds = make_folds(n, 5, 9);
  ASSERT_EQ(folds.size(), n);
  std::vector<std::size_t> seen(n, 0);
  for (std::size_t k = 0; k < 5; ++k) {
    SplitIndices s = fold_split(folds, 5, k);
    EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), n);
    for (std::size_t i : s.test) ++seen[i];
    std::set<std::size_t> parts;
    for (auto* part : {&s.train, &s.validation, &s.test}) parts.insert(part->begin(), part->end());
    EXPECT_EQ(parts.size(), n);
  }
  for (std::size_t c : seen) EXPECT_EQ(c, 1u);
  EXPECT_THROW(fold_split(folds, 5, 5), std::invalid_argument);
}

TEST(Splits, ManifestJsonRoundTrip) {
  Manifest m;
  m.task = TaskKind::kDialogue;
  m.seed = 42;
  m.count = 4;
  m.files["dialogues"] = "d.jsonl";
  m.files["table"] = "t.csv";
  m.folds = {0, 1, 2, 1};
  m.fold_count = 3;
  Manifest back = manifest_from_json(manifest_to_json(m));
  EXPECT_EQ(back.task, m.task);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.files, m.files);
  EXPECT_EQ(back.folds, m.folds);
  EXPECT_EQ(back.resolve(1), fold_split(m.folds, 3, 1));
  EXPECT_EQ(parse_task_kind(task_kind_name(TaskKind::kCoref)), TaskKind::kCoref);
  EXPECT_THROW(parse_task_kind("poetry"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Synthetic fixtures.

class SyntheticFiles : public ::testing::TestWithParam<TaskKind> {};

TEST_P(SyntheticFiles, SameSeedGivesIdenticalBytes) {
  TempDir a("syn_a");
  TempDir b("syn_b");
  SyntheticOptions small;
  small.recipes.count = 40;
  small.coref.count = 20;
  Manifest ma = write_synthetic(GetParam(), a.path().string(), 11, small);
  Manifest mb = write_synthetic(GetParam(), b.path().string(), 11, small);
  EXPECT_EQ(manifest_to_json(ma), manifest_to_json(mb));
  for (const auto& [role, name] : ma.files) {
    EXPECT_EQ(read_file(a.file(name)), read_file(b.file(name))) << role;
  }
  EXPECT_EQ(read_file(a.file(kManifestFile)), read_file(b.file(kManifestFile)));
  TempDir c("syn_c");
  Manifest mc = write_synthetic(GetParam(), c.path().string(), 12, small);
  bool differs = false;
  for (const auto& [role, name] : ma.files) {
    differs = differs || read_file(a.file(name)) != read_file(c.file(name));
  }
  EXPECT_TRUE(differs);
}

INSTANTIATE_TEST_SUITE_P(AllTasks, SyntheticFiles,
                         ::testing::Values(TaskKind::kRecipes, TaskKind::kDialogue,
                                           TaskKind::kCoref),
                         [](const auto& info) { return std::string(task_kind_name(info.param)); });

TEST(Synthetic, RecipeCopyLabelsPointAtRealIngredientTokens) {
  SyntheticRecipes syn = synthesize_recipes(4);
  std::size_t copies = 0;
  for (const auto& raw : syn.recipes) {
    RecipeExample ex = make_recipe_example(raw);
    for (std::size_t v = 0; v < ex.recipe_tokens.size(); ++v) {
      for (const TokenPosition& pos : ex.copy_candidates[v]) {
        ASSERT_LT(pos.ingredient, ex.ingredient_tokens.size());
        ASSERT_LT(pos.token, ex.ingredient_tokens[pos.ingredient].size());
        EXPECT_EQ(ex.ingredient_tokens[pos.ingredient][pos.token], ex.recipe_tokens[v]);
        ++copies;
      }
    }
  }
  EXPECT_GT(copies, syn.recipes.size());
}

TEST(Synthetic, HeldOutNamesOnlyAppearOutsideTraining) {
  SyntheticRecipes syn = synthesize_recipes(4);
  ASSERT_FALSE(syn.held_out_names.empty());
  const std::set<std::string> held(syn.held_out_names.begin(), syn.held_out_names.end());
  std::size_t test_uses = 0;
  for (std::size_t i : syn.split.train) {
    for (const auto& tok : make_recipe_example(syn.recipes[i]).recipe_tokens) {
      EXPECT_EQ(held.count(tok), 0u) << tok;
    }
  }
  for (std::size_t i : syn.split.test) {
    for (const auto& tok : make_recipe_example(syn.recipes[i]).recipe_tokens) {
      test_uses += held.count(tok);
    }
  }
  EXPECT_GT(test_uses, 0u);
}

TEST(Synthetic, PhoneAnswerIsTheRowsPhoneCell) {
  SyntheticDialogues syn = synthesize_dialogues(5);
  PreparedTable p = prepare_table(syn.table);
  std::size_t answers = 0;
  for (const auto& raw : syn.dialogues) {
    DialogueExample ex = make_dialogue_example(raw, p);
    for (const Utterance& u : ex.turns) {
      // "the phone number of _NAME_j is _PHONE_j ."
      if (u.tokens.size() == 8 && u.tokens[1] == "phone" && u.tokens[0] == "the") {
        const std::string row = u.tokens[4].substr(std::string("_NAME_").size());
        EXPECT_EQ(u.tokens[6], "_PHONE_" + row);
        const std::size_t r = std::stoul(row) - 1;
        EXPECT_EQ(p.table->cell_tokens[r][4], u.tokens[6]);
        ++answers;
      }
    }
  }
  EXPECT_GT(answers, 0u);
}

TEST(Synthetic, HeldOutCellsAreAbsentFromTrainingFolds) {
  SyntheticDialogues syn = synthesize_dialogues(6);
  PreparedTable p = prepare_table(syn.table);
  const std::size_t cells = syn.table.rows.size() * syn.table.header.size();
  EXPECT_EQ(syn.held_out_cells.size() * 5, cells);
  std::set<std::string> held;
  for (const HeldOutCell& c : syn.held_out_cells) {
    held.insert(p.table->cell_tokens[c.row][c.column]);
  }
  std::set<std::string> test_seen;
  for (std::size_t d = 0; d < syn.dialogues.size(); ++d) {
    DialogueExample ex = make_dialogue_example(syn.dialogues[d], p);
    for (const Utterance& u : ex.turns) {
      for (const auto& t : u.tokens) {
        if (held.count(t) == 0) continue;
        EXPECT_EQ(syn.folds[d], 0u) << t;
        test_seen.insert(t);
      }
    }
  }
  EXPECT_EQ(test_seen, held);
}

TEST(Synthetic, CorefDocumentsHaveRecurringEntities) {
  SyntheticCoref syn = synthesize_coref(7);
  EXPECT_EQ(syn.documents.size(), SyntheticCorefOptions{}.count);
  for (const auto& raw : syn.documents) {
    AnnotatedDocument doc = preprocess_coref(raw);
    EXPECT_GE(doc.entity_count(), 1u);
  }
}

}  // namespace
}  // namespace reflm
