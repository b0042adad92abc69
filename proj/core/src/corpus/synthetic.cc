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

#include "reflm/corpus/synthetic.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace reflm {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    return static_cast<std::size_t>(engine_() % n);
  }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// Distinct pseudo-words built from syllables, avoiding `taken`.
std::vector<std::string> make_words(Rng& rng, std::size_t n,
                                    const std::set<std::string>& taken) {
  static const std::vector<std::string> kSyllables = {
      "ba", "ko", "ri", "ta", "mu", "ne", "lo", "fi", "sa", "de", "gu",
      "pe", "zo", "vi", "ha", "ju", "ce", "no", "ly", "wa", "qi", "xe"};
  std::set<std::string> seen = taken;
  std::vector<std::string> out;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 100000) throw std::runtime_error("word pool exhausted");
    std::string w;
    const std::size_t parts = rng.between(2, 3);
    for (std::size_t i = 0; i < parts; ++i) w += rng.pick(kSyllables);
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

}  // namespace

SyntheticRecipes synthesize_recipes(std::uint64_t seed,
                                    const SyntheticRecipeOptions& options) {
  if (options.held_out_names == 0 || options.held_out_names >= options.name_pool ||
      options.min_ingredients < 1 || options.min_ingredients > options.max_ingredients ||
      options.max_ingredients > options.name_pool - options.held_out_names) {
    throw std::invalid_argument("inconsistent synthetic recipe options");
  }
  static const std::vector<std::string> kUnits = {
      "cup", "tablespoon", "teaspoon", "pound", "ounce", "clove", "can", "pinch"};
  static const std::vector<std::string> kVerbs = {"add", "mix",  "stir", "chop",
                                                  "pour", "fold", "whisk", "slice"};
  static const std::vector<std::string> kQuantities = {"1", "2", "3", "4"};
  const std::set<std::string> reserved = {"the", "of", "a", "prepare", "water", "serve"};

  Rng rng(seed);
  const auto names = make_words(rng, options.name_pool, reserved);
  const std::vector<std::string> known(names.begin(),
                                       names.end() - static_cast<long>(options.held_out_names));
  const std::vector<std::string> held(names.end() - static_cast<long>(options.held_out_names),
                                      names.end());

  SyntheticRecipes out;
  out.held_out_names = held;
  for (std::size_t i = 0; i < options.count; ++i) {
    const bool test = i % 10 == 9;
    const bool validation = i % 10 == 8;
    const std::size_t k = rng.between(options.min_ingredients, options.max_ingredients);
    std::vector<std::string> chosen;
    std::set<std::string> used;
    if (test) {
      chosen.push_back(rng.pick(held));
      used.insert(chosen.back());
    }
    while (chosen.size() < k) {
      const bool from_held = test && rng.unit() < 0.25;
      const std::string& name = from_held ? rng.pick(held) : rng.pick(known);
      if (used.insert(name).second) chosen.push_back(name);
    }
    rng.shuffle(chosen);

    RawRecipe recipe;
    std::vector<std::string> sentences;
    for (const auto& name : chosen) {
      const std::string& unit = rng.pick(kUnits);
      recipe.ingredients.push_back(join({rng.pick(kQuantities), unit, name}));
      sentences.push_back(join({rng.pick(kVerbs), "the", unit, "of", name, "."}));
    }
    const std::size_t water = rng.below(sentences.size() + 1);
    sentences.insert(sentences.begin() + static_cast<long>(water),
                     "prepare a cup of water .");
    sentences.push_back("serve .");
    recipe.recipe = join(sentences);
    out.recipes.push_back(std::move(recipe));
    (test ? out.split.test : validation ? out.split.validation : out.split.train)
        .push_back(i);
  }
  return out;
}

SyntheticDialogues synthesize_dialogues(std::uint64_t seed,
                                        const SyntheticDialogueOptions& options) {
  static const std::vector<std::string> kFoods = {
      "italian", "chinese",  "indian", "thai",     "french",  "spanish",
      "korean",  "turkish",  "greek",  "mexican",  "british", "japanese",
      "lebanese", "vietnamese", "persian", "african"};
  static const std::vector<std::string> kAdjectives = {
      "golden", "red", "royal", "little", "grand", "happy", "silver", "lucky",
      "jade", "old", "blue", "bright"};
  static const std::vector<std::string> kNouns = {
      "wok", "lotus", "garden", "house", "kitchen", "palace", "bistro",
      "dragon", "lantern", "oven", "grill", "terrace"};
  static const std::vector<std::string> kStreets = {
      "milton", "regent", "mill", "hills", "trumpington", "castle", "bridge", "market"};
  static const std::vector<std::string> kAreas = {"north", "south", "east", "west",
                                                  "centre"};
  static const std::vector<std::string> kPrices = {"cheap", "moderate", "expensive"};
  static const std::vector<std::string> kLetters = {"a", "b", "d", "e", "f", "h",
                                                    "j", "l", "n", "p", "q", "r",
                                                    "s", "t", "u", "w", "x", "y", "z"};
  // Row 0 has no address, so at most three answer cells per row minus one.
  if (options.rows == 0 || options.rows > kFoods.size() ||
      options.held_out_cells > 3 * options.rows - 1 || options.fold_count < 3) {
    throw std::invalid_argument("inconsistent synthetic dialogue options");
  }
  Rng rng(seed);
  SyntheticDialogues out;
  out.table.header = {"name", "food", "area", "pricerange", "phone", "address", "postcode"};

  std::vector<std::string> foods = kFoods;
  rng.shuffle(foods);
  std::set<std::string> names;
  std::set<std::string> postcodes;
  // One training row has no address.
  const std::size_t empty_address_row = 0;
  for (std::size_t r = 0; r < options.rows; ++r) {
    std::string name;
    do {
      name = rng.pick(kAdjectives) + " " + rng.pick(kNouns);
    } while (!names.insert(name).second);
    std::string phone = "01223 ";
    for (int d = 0; d < 6; ++d) phone += static_cast<char>('0' + rng.below(10));
    std::string postcode;
    do {
      postcode = "cb" + std::to_string(rng.between(1, 9)) + " " +
                 std::to_string(rng.between(1, 9)) + rng.pick(kLetters) +
                 rng.pick(kLetters);
    } while (!postcodes.insert(postcode).second);
    const std::string address =
        r == empty_address_row
            ? ""
            : std::to_string(rng.between(1, 99)) + " " + rng.pick(kStreets) + " road";
    out.table.rows.push_back({name, foods[r], rng.pick(kAreas), rng.pick(kPrices),
                              phone, address, postcode});
  }
  // Question q asks about column kQuestionColumn[q].
  static constexpr std::size_t kQuestionColumn[4] = {4, 5, 3, 6};
  std::vector<HeldOutCell> candidates;
  for (std::size_t r = 0; r < options.rows; ++r) {
    for (std::size_t c : {4, 5, 6}) {
      if (r == empty_address_row && c == 5) continue;
      candidates.push_back({r, c});
    }
  }
  rng.shuffle(candidates);
  candidates.resize(options.held_out_cells);
  std::sort(candidates.begin(), candidates.end(),
            [](const HeldOutCell& a, const HeldOutCell& b) {
              return std::tie(a.row, a.column) < std::tie(b.row, b.column);
            });
  out.held_out_cells = candidates;

  static const std::vector<std::string> kGreetings = {
      "hello , welcome to the restaurant system . how may i help you ?",
      "hello , how may i help you ?"};
  static const std::vector<std::string> kRequests = {
      "i want a {food} restaurant .", "i am looking for {food} food .",
      "{food} food please ."};
  auto fill = [](std::string text, const std::string& key, const std::string& value) {
    const std::string slot = "{" + key + "}";
    for (auto pos = text.find(slot); pos != std::string::npos; pos = text.find(slot)) {
      text.replace(pos, slot.size(), value);
    }
    return text;
  };
  auto answer = [&](const std::vector<std::string>& row, std::size_t question) {
    switch (question) {
      case 0:
        return std::pair<std::string, std::string>{"what is the phone number ?",
                                                   "the phone number of " + row[0] + " is " + row[4] + " ."};
      case 1:
        if (row[5].empty()) {
          return std::pair<std::string, std::string>{
              "what is the address ?", "sorry , i do not know the address of " + row[0] + " ."};
        }
        return std::pair<std::string, std::string>{"what is the address ?",
                                                   row[0] + " is at " + row[5] + " ."};
      case 2:
        return std::pair<std::string, std::string>{
            "what is the price range ?", row[0] + " is in the " + row[3] + " price range ."};
      default:
        return std::pair<std::string, std::string>{"what is the post code ?",
                                                   "the post code of " + row[0] + " is " + row[6] + " ."};
    }
  };
  // Asks one or two of `questions` (question indices into `answer`).
  auto full_dialogue = [&](const std::vector<std::string>& row,
                           std::vector<std::size_t> questions, bool ask_first) {
    RawDialogue d;
    d.turns.push_back({Speaker::kMachine, rng.pick(kGreetings)});
    d.turns.push_back({Speaker::kUser, fill(rng.pick(kRequests), "food", row[1])});
    d.turns.push_back({Speaker::kMachine, row[0] + " serves " + row[1] +
                                              " food in the " + row[2] +
                                              " part of town ."});
    const std::size_t first = ask_first ? questions.front() : 0;
    rng.shuffle(questions);
    if (ask_first) {
      std::iter_swap(questions.begin(),
                     std::find(questions.begin(), questions.end(), first));
    }
    const std::size_t asked = std::min<std::size_t>(rng.between(1, 2), questions.size());
    for (std::size_t q = 0; q < asked; ++q) {
      auto [ask, reply] = answer(row, questions[q]);
      d.turns.push_back({Speaker::kUser, ask});
      d.turns.push_back({Speaker::kMachine, reply});
    }
    d.turns.push_back({Speaker::kUser, "thank you , goodbye ."});
    d.turns.push_back({Speaker::kMachine, "goodbye ."});
    return d;
  };

  // Fold 0 takes every dialogue that reveals a held-out cell.
  std::vector<std::pair<RawDialogue, long>> pool;
  for (std::size_t r = 0; r < options.rows; ++r) {
    const auto& row = out.table.rows[r];
    std::vector<std::size_t> seen, held;
    for (std::size_t q = 0; q < 4; ++q) {
      const HeldOutCell cell{r, kQuestionColumn[q]};
      const bool is_held = std::find(out.held_out_cells.begin(), out.held_out_cells.end(),
                                     cell) != out.held_out_cells.end();
      (is_held ? held : seen).push_back(q);
    }
    for (std::size_t i = 0; i < options.dialogues_per_row; ++i) {
      pool.emplace_back(full_dialogue(row, seen, false), -1);
    }
    for (std::size_t i = 0; !held.empty() && i < options.held_out_dialogues_per_row; ++i) {
      std::vector<std::size_t> qs = held;
      std::rotate(qs.begin(), qs.begin() + static_cast<long>(i % held.size()), qs.end());
      qs.insert(qs.end(), seen.begin(), seen.end());
      pool.emplace_back(full_dialogue(row, qs, true), 0);
    }
  }
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t free_slot = 0;
  for (std::size_t i : order) {
    out.dialogues.push_back(pool[i].first);
    out.folds.push_back(pool[i].second >= 0 ? static_cast<std::size_t>(pool[i].second)
                                            : free_slot++ % options.fold_count);
  }
  return out;
}

SyntheticCoref synthesize_coref(std::uint64_t seed, const SyntheticCorefOptions& options) {
  if (options.min_entities < 1 || options.min_entities > options.max_entities ||
      options.max_entities > options.name_pool || options.min_sentences < 2 ||
      options.min_sentences > options.max_sentences) {
    throw std::invalid_argument("inconsistent synthetic coref options");
  }
  static const std::vector<std::string> kPlaces = {"market", "station", "office", "park",
                                                   "library", "harbour", "museum", "bank"};
  static const std::vector<std::string> kAdjectives = {"tired", "happy", "late", "busy",
                                                       "quiet", "angry", "early"};
  static const std::vector<std::string> kThings = {"book", "car", "letter", "coat",
                                                   "ticket", "lamp", "bicycle"};
  static const std::vector<std::string> kAnimals = {"dog", "cat", "horse", "bird"};
  static const std::vector<std::string> kWeather = {"cold", "warm", "wet", "windy"};
  const std::set<std::string> reserved = {"mr", "ms", "he", "she", "the", "a", "was",
                                          "said", "that", "met", "at", "went", "to"};
  Rng rng(seed);
  const auto names = make_words(rng, options.name_pool, reserved);
  std::vector<bool> male(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) male[i] = rng.unit() < 0.5;

  SyntheticCoref out;
  for (std::size_t d = 0; d < options.count; ++d) {
    RawCorefDoc doc;
    const std::size_t n_entities = rng.between(options.min_entities, options.max_entities);
    std::vector<std::size_t> cast;
    while (cast.size() < n_entities) {
      const std::size_t who = rng.below(names.size());
      if (std::find(cast.begin(), cast.end(), who) == cast.end()) cast.push_back(who);
    }
    // Arbitrary external entity ids.
    std::vector<long> ids;
    for (std::size_t e = 0; e < n_entities; ++e) {
      ids.push_back(static_cast<long>(10 * (e + 1) + rng.below(10)));
    }
    std::vector<std::size_t> mentioned(n_entities, 0);

    auto emit = [&](const std::string& word) { doc.tokens.push_back(word); };
    auto mention = [&](std::size_t e) {
      const std::size_t start = doc.tokens.size();
      const std::string& name = names[cast[e]];
      if (mentioned[e] == 0) {
        emit(male[cast[e]] ? "mr" : "ms");
        emit(name);
      } else if (rng.unit() < 0.2) {
        emit(male[cast[e]] ? "he" : "she");
      } else {
        emit(name);
      }
      ++mentioned[e];
      doc.mentions.push_back({start, doc.tokens.size(), ids[e]});
    };
    auto other = [&](std::size_t e) {
      return n_entities == 1 ? e : (e + 1 + rng.below(n_entities - 1)) % n_entities;
    };

    const std::size_t sentences = rng.between(options.min_sentences, options.max_sentences);
    const std::size_t singleton_at = rng.below(sentences);
    for (std::size_t s = 0; s < sentences; ++s) {
      const std::size_t e = rng.below(n_entities);
      if (s == singleton_at) {
        mention(e);
        emit("saw");
        emit("a");
        const std::size_t start = doc.tokens.size();
        emit(rng.pick(kAnimals));
        doc.mentions.push_back({start, doc.tokens.size(), 999});
        emit(".");
        continue;
      }
      switch (rng.below(5)) {
        case 0:
          mention(e);
          emit("went");
          emit("to");
          emit("the");
          emit(rng.pick(kPlaces));
          break;
        case 1:
          mention(e);
          emit("met");
          mention(other(e));
          emit("at");
          emit("the");
          emit(rng.pick(kPlaces));
          break;
        case 2:
          mention(e);
          emit("said");
          emit("that");
          mention(other(e));
          emit("was");
          emit(rng.pick(kAdjectives));
          break;
        case 3:
          mention(e);
          emit("bought");
          emit("a");
          emit(rng.pick(kThings));
          break;
        default:
          emit("the");
          emit("weather");
          emit("was");
          emit(rng.pick(kWeather));
          break;
      }
      emit(".");
    }
    for (std::size_t e = 0; e < n_entities; ++e) {
      while (mentioned[e] < 2) {
        mention(e);
        emit("left");
        emit(".");
      }
    }
    out.documents.push_back(std::move(doc));
  }
  out.split = make_split(options.count, seed ^ 0x5eedULL);
  return out;
}

Manifest write_synthetic(TaskKind task, const std::string& dir, std::uint64_t seed,
                         const SyntheticOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Manifest m;
  m.task = task;
  m.seed = seed;
  switch (task) {
    case TaskKind::kRecipes: {
      const auto data = synthesize_recipes(seed, options.recipes);
      m.files["recipes"] = "recipes.jsonl";
      write_recipe_jsonl((fs::path(dir) / m.files["recipes"]).string(), data.recipes);
      m.count = data.recipes.size();
      m.split = data.split;
      break;
    }
    case TaskKind::kDialogue: {
      const auto data = synthesize_dialogues(seed, options.dialogue);
      m.files["dialogues"] = "dialogues.jsonl";
      m.files["table"] = "table.csv";
      write_dialogue_jsonl((fs::path(dir) / m.files["dialogues"]).string(), data.dialogues);
      write_table_csv((fs::path(dir) / m.files["table"]).string(), data.table);
      m.count = data.dialogues.size();
      m.folds = data.folds;
      m.fold_count = options.dialogue.fold_count;
      break;
    }
    case TaskKind::kCoref: {
      const auto data = synthesize_coref(seed, options.coref);
      m.files["documents"] = "documents.jsonl";
      write_coref_jsonl((fs::path(dir) / m.files["documents"]).string(), data.documents);
      m.count = data.documents.size();
      m.split = data.split;
      break;
    }
  }
  save_manifest(dir, m);
  return m;
}

}  // namespace reflm
