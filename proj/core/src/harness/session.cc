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

#include "reflm/harness/session.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "reflm/corpus/coref_docs.h"
#include "reflm/corpus/dialogue.h"
#include "reflm/harness/bleu.h"
#include "reflm/harness/parallel.h"
#include "reflm/models/coref_model.h"
#include "reflm/models/recipe_model.h"
#include "reflm/models/table_model.h"

namespace reflm {

namespace fs = std::filesystem;

Subset parse_subset(const std::string& text) {
  if (text == "train") return Subset::kTrain;
  if (text == "validation" || text == "valid") return Subset::kValidation;
  if (text == "test") return Subset::kTest;
  throw std::invalid_argument("unknown subset '" + text +
                              "' (expected train, validation or test)");
}

const char* subset_name(Subset subset) {
  switch (subset) {
    case Subset::kTrain:
      return "train";
    case Subset::kValidation:
      return "validation";
    case Subset::kTest:
      return "test";
  }
  return "?";
}

const std::vector<std::size_t>& Session::subset(Subset s) const {
  switch (s) {
    case Subset::kTrain:
      return split_.train;
    case Subset::kValidation:
      return split_.validation;
    case Subset::kTest:
      break;
  }
  return split_.test;
}

namespace {

std::string data_file(const std::string& dir, const Manifest& m, const std::string& role) {
  auto it = m.files.find(role);
  if (it == m.files.end()) {
    throw std::runtime_error("manifest in " + dir + " lists no '" + role + "' file");
  }
  return (fs::path(dir) / it->second).string();
}

VocabOptions vocab_options(const TrainConfig& c) {
  VocabOptions o;
  if (c.max_vocab != 0) o.max_size = c.max_vocab;
  o.min_count = c.min_count;
  return o;
}

void check_split(const SplitIndices& split, std::size_t n) {
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (std::size_t i : *part) {
      if (i >= n) {
        throw std::runtime_error("split index " + std::to_string(i) +
                                 " outside the loaded corpus of " + std::to_string(n));
      }
    }
  }
  if (split.train.empty()) throw std::runtime_error("training split is empty");
}

// log of (1 - pi) p^vocab plus pi times copy mass grouped by output symbol.
std::vector<double> symbol_log_probs(const MixtureStep& step,
                                     const std::vector<std::size_t>& copy_symbols,
                                     std::size_t symbols) {
  std::vector<double> p(symbols, 0.0);
  const std::vector<double> vocab = step.vocab_probs();
  const double pi = step.has_reference() ? step.switch_prob() : 0.0;
  for (std::size_t v = 0; v < vocab.size(); ++v) p[v] = (1.0 - pi) * vocab[v];
  if (step.has_reference()) {
    const auto copy = step.copy_probs.data();
    for (std::size_t k = 0; k < copy_symbols.size(); ++k) {
      p[copy_symbols[k]] += pi * copy[k];
    }
  }
  for (double& x : p) x = std::log(x);
  return p;
}

std::string step_label(std::size_t step, const std::string& token) {
  return std::to_string(step) + ":" + token;
}

// Clips [begin, end) to [0, available).
std::pair<std::size_t, std::size_t> clip_range(std::size_t begin, std::size_t end,
                                               std::size_t available,
                                               std::vector<std::string>* warnings) {
  if (end == kAllSteps) end = std::max(begin, available);
  std::size_t b = std::min(begin, available);
  std::size_t e = std::min(end, available);
  if (e < b) e = b;
  if ((b != begin || e != end) && warnings != nullptr) {
    warnings->push_back("step range [" + std::to_string(begin) + ", " +
                        std::to_string(end) + ") clipped to [" + std::to_string(b) +
                        ", " + std::to_string(e) + ")");
  }
  return {b, e};
}

class RecipeSession : public Session {
 public:
  RecipeSession(const TrainConfig& config, const Manifest& manifest,
                const std::string& dir, const Vocab* vocab, LoadReport* report) {
    config_ = config;
    manifest_ = manifest;
    examples_ = load_recipes(data_file(dir, manifest, "recipes"), report);
    split_ = manifest.resolve(config.fold);
    check_split(split_, examples_.size());
    std::vector<std::vector<std::string>> streams;
    for (std::size_t i : split_.train) {
      const auto& ex = examples_[i];
      streams.push_back(ex.recipe_tokens);
      for (const auto& ing : ex.ingredient_tokens) streams.push_back(ing);
    }
    for (const auto& s : streams) train_surfaces_.insert(s.begin(), s.end());
    vocab_ = vocab != nullptr ? *vocab : build_vocab(streams, vocab_options(config));
    for (auto& ex : examples_) assign_ids(ex, vocab_);

    RecipeModelConfig mc;
    mc.vocab_size = vocab_.size();
    mc.embed_dim = config.embed_dim;
    mc.hidden_dim = config.hidden_dim;
    mc.attention_dim = config.attention_dim;
    mc.use_reference = config.use_reference;
    mc.bos_id = Vocab::kBos;
    mc.eos_id = Vocab::kEos;
    model_ = std::make_unique<RecipeModel>(mc, config.seed);
  }

  ParameterSet& parameters() override { return model_->parameters(); }
  const ParameterSet& parameters() const override { return model_->parameters(); }
  std::size_t corpus_size() const override { return examples_.size(); }
  const RecipeModel& model() const { return *model_; }

  Tensor example_nll(std::size_t index) const override {
    return model_->sequence_nll(examples_.at(index), config_.mode);
  }

  std::vector<TokenScore> score_example(std::size_t index) const override {
    const auto& ex = examples_.at(index);
    const auto lps = model_->token_log_probs(ex);
    std::vector<TokenScore> out;
    for (std::size_t v = 0; v < lps.size(); ++v) {
      TokenScore s;
      s.log_prob = lps[v];
      if (v < ex.recipe_tokens.size()) {
        s.reference = ex.copy_labels[v] != 0;
        s.oov = train_surfaces_.count(ex.recipe_tokens[v]) == 0;
      }
      out.push_back(s);
    }
    return out;
  }

  std::vector<GeneratedUtterance> generate(std::size_t index,
                                           const BeamOptions& options) const override {
    NoRecordScope no_record;
    const auto& ex = examples_.at(index);
    const auto encoded = model_->encode_ingredients(ex.ingredients);
    // Output symbols: the vocabulary, then ingredient surfaces outside it.
    std::vector<std::string> extra;
    std::vector<std::size_t> copy_symbols;
    for (const auto& ing : ex.ingredient_tokens) {
      for (const auto& tok : ing) {
        if (vocab_.contains(tok)) {
          copy_symbols.push_back(vocab_.id(tok));
          continue;
        }
        auto it = std::find(extra.begin(), extra.end(), tok);
        copy_symbols.push_back(vocab_.size() +
                               static_cast<std::size_t>(it - extra.begin()));
        if (it == extra.end()) extra.push_back(tok);
      }
    }
    const std::size_t symbols = vocab_.size() + extra.size();
    struct State {
      LstmState decoder;
      Tensor context;
    };
    const State initial{encoded.init, Tensor::zeros({config_.hidden_dim})};
    auto expand = [&](const State& state, std::size_t prev) {
      const std::size_t input = prev < vocab_.size() ? prev : Vocab::kUnk;
      MixtureStep step = model_->decode_step(input, state.decoder, state.context, encoded);
      auto lp = symbol_log_probs(step, copy_symbols, symbols);
      return std::make_pair(State{step.decoder, step.context}, std::move(lp));
    };
    BeamOptions opts = options;
    opts.eos = Vocab::kEos;
    const auto hyps = beam_search(initial, Vocab::kBos, expand, opts);
    GeneratedUtterance out;
    out.reference = ex.recipe_tokens;
    if (!hyps.empty()) {
      out.log_prob = hyps.front().log_prob;
      for (std::size_t s : hyps.front().tokens) {
        out.tokens.push_back(s < vocab_.size() ? vocab_.token(s) : extra[s - vocab_.size()]);
      }
    }
    return {out};
  }

  HeatMap heatmap(std::size_t index, std::size_t begin, std::size_t end,
                  std::vector<std::string>* warnings) const override {
    if (!config_.use_reference) {
      throw std::invalid_argument("the model has no copy mechanism to visualize");
    }
    NoRecordScope no_record;
    const auto& ex = examples_.at(index);
    const auto steps = model_->teacher_forced_steps(ex);
    const auto [b, e] = clip_range(begin, end, steps.size(), warnings);
    HeatMap map;
    map.row_labels.push_back("p(z=1)");
    for (std::size_t i = 0; i < ex.ingredient_tokens.size(); ++i) {
      for (std::size_t j = 0; j < ex.ingredient_tokens[i].size(); ++j) {
        map.row_labels.push_back("ingredient " + std::to_string(i + 1) + ":" +
                                 ex.ingredient_tokens[i][j]);
      }
    }
    map.values.assign(map.row_labels.size(), {});
    for (std::size_t v = b; v < e; ++v) {
      const std::string target =
          v < ex.recipe_tokens.size() ? ex.recipe_tokens[v] : vocab_.token(Vocab::kEos);
      map.column_labels.push_back(step_label(v, target));
      map.values[0].push_back(steps[v].switch_prob());
      const auto copy = steps[v].copy_probs.data();
      for (std::size_t k = 0; k < copy.size(); ++k) map.values[k + 1].push_back(copy[k]);
    }
    return map;
  }

 private:
  std::vector<RecipeExample> examples_;
  std::unique_ptr<RecipeModel> model_;
};

class DialogueSession : public Session {
 public:
  DialogueSession(const TrainConfig& config, const Manifest& manifest,
                  const std::string& dir, const Vocab* vocab, LoadReport* report) {
    config_ = config;
    manifest_ = manifest;
    split_ = manifest.resolve(config.fold);
    corpus_ = load_dialogues(data_file(dir, manifest, "dialogues"),
                             data_file(dir, manifest, "table"), vocab_options(config),
                             split_.train, report);
    check_split(split_, corpus_.examples.size());
    if (vocab != nullptr) {
      corpus_.vocab = *vocab;
      assign_ids(*corpus_.table, corpus_.vocab);
      for (auto& ex : corpus_.examples) assign_ids(ex, corpus_.vocab);
    }
    vocab_ = corpus_.vocab;
    for (std::size_t i : split_.train) {
      for (const auto& u : corpus_.examples[i].turns) {
        train_surfaces_.insert(u.tokens.begin(), u.tokens.end());
      }
    }
    TableModelConfig mc;
    mc.vocab_size = vocab_.size();
    mc.embed_dim = config.embed_dim;
    mc.hidden_dim = config.hidden_dim;
    mc.attention_dim = config.attention_dim;
    mc.use_reference = config.use_reference;
    mc.sentence_attention = config.sentence_attention;
    mc.bos_id = Vocab::kBos;
    mc.eos_id = Vocab::kEos;
    model_ = std::make_unique<TableModel>(mc, config.seed);
  }

  ParameterSet& parameters() override { return model_->parameters(); }
  const ParameterSet& parameters() const override { return model_->parameters(); }
  std::size_t corpus_size() const override { return corpus_.examples.size(); }

  Tensor example_nll(std::size_t index) const override {
    return model_->dialogue_nll(corpus_.examples.at(index), config_.mode);
  }

  std::vector<TokenScore> score_example(std::size_t index) const override {
    const auto& ex = corpus_.examples.at(index);
    const auto lps = model_->token_log_probs(ex);
    std::vector<TokenScore> out;
    std::size_t k = 0;
    for (const auto& u : ex.turns) {
      if (u.speaker != Speaker::kMachine) continue;
      for (std::size_t v = 0; v <= u.tokens.size(); ++v) {
        TokenScore s;
        s.log_prob = lps.at(k++);
        if (v < u.tokens.size()) {
          s.reference = u.copy_labels[v] != 0;
          s.oov = train_surfaces_.count(u.tokens[v]) == 0;
        }
        out.push_back(s);
      }
    }
    return out;
  }

  std::vector<GeneratedUtterance> generate(std::size_t index,
                                           const BeamOptions& options) const override {
    NoRecordScope no_record;
    const auto& ex = corpus_.examples.at(index);
    std::optional<EncodedTable> table;
    if (config_.use_reference) table = model_->encode_table(*ex.table);
    std::vector<std::size_t> copy_symbols;
    for (const auto& row : ex.table->cells) {
      copy_symbols.insert(copy_symbols.end(), row.begin(), row.end());
    }
    std::vector<GeneratedUtterance> out;
    for (std::size_t t = 0; t < ex.turns.size(); ++t) {
      if (ex.turns[t].speaker != Speaker::kMachine) continue;
      const std::vector<Utterance> history(ex.turns.begin(),
                                           ex.turns.begin() + static_cast<long>(t));
      const HistoryEncoding hist = model_->encode_history(history);
      std::optional<ProjectedKeys> previous;
      if (config_.sentence_attention && !hist.previous_states.empty()) {
        previous = model_->project_utterance(hist.previous_states);
      }
      auto expand = [&](const LstmState& state, std::size_t prev) {
        DialogueStep step = model_->dialogue_decode_step(
            prev, state, table ? &*table : nullptr, previous ? &*previous : nullptr,
            config_.sentence_attention);
        auto lp = symbol_log_probs(step.mixture, copy_symbols, vocab_.size());
        return std::make_pair(step.mixture.decoder, std::move(lp));
      };
      BeamOptions opts = options;
      opts.eos = Vocab::kEos;
      const auto hyps = beam_search(hist.turn_state, Vocab::kBos, expand, opts);
      GeneratedUtterance g;
      g.reference = ex.turns[t].tokens;
      if (!hyps.empty()) {
        g.log_prob = hyps.front().log_prob;
        g.tokens = vocab_.decode(hyps.front().tokens);
      }
      out.push_back(std::move(g));
    }
    return out;
  }

  HeatMap heatmap(std::size_t index, std::size_t begin, std::size_t end,
                  std::vector<std::string>* warnings) const override {
    if (!config_.use_reference) {
      throw std::invalid_argument("the model has no table pointer to visualize");
    }
    NoRecordScope no_record;
    const auto& ex = corpus_.examples.at(index);
    const DatabaseTable& table = *ex.table;
    std::vector<DialogueStep> steps;
    std::vector<std::string> labels;
    for (std::size_t t = 0; t < ex.turns.size(); ++t) {
      if (ex.turns[t].speaker != Speaker::kMachine) continue;
      auto turn_steps = model_->teacher_forced_steps(ex, t);
      for (std::size_t v = 0; v < turn_steps.size(); ++v) {
        const auto& toks = ex.turns[t].tokens;
        labels.push_back(v < toks.size() ? toks[v] : vocab_.token(Vocab::kEos));
        steps.push_back(std::move(turn_steps[v]));
      }
    }
    const auto [b, e] = clip_range(begin, end, steps.size(), warnings);
    HeatMap map;
    map.row_labels.push_back("p(z=1)");
    for (const auto& a : table.attribute_tokens) map.row_labels.push_back("attribute:" + a);
    for (std::size_t r = 0; r < table.rows(); ++r) {
      map.row_labels.push_back("row:" + std::to_string(r + 1));
    }
    for (const auto& a : table.attribute_tokens) map.row_labels.push_back("column:" + a);
    for (std::size_t r = 0; r < table.rows(); ++r) {
      for (std::size_t c = 0; c < table.cols(); ++c) {
        map.row_labels.push_back("cell:" + std::to_string(r + 1) + ":" +
                                 table.attribute_tokens[c] + ":" + table.cell_tokens[r][c]);
      }
    }
    map.values.assign(map.row_labels.size(), {});
    for (std::size_t i = b; i < e; ++i) {
      map.column_labels.push_back(step_label(i, labels[i]));
      const DialogueStep& s = steps[i];
      std::size_t row = 0;
      map.values[row++].push_back(s.mixture.switch_prob());
      for (const Tensor* dist : {&s.pointer->attribute_probs, &s.pointer->row_probs,
                                 &s.pointer->column_probs, &s.pointer->copy_probs}) {
        for (double p : dist->data()) map.values[row++].push_back(p);
      }
    }
    return map;
  }

 private:
  DialogueCorpus corpus_;
  std::unique_ptr<TableModel> model_;
};

class CorefSession : public Session {
 public:
  CorefSession(const TrainConfig& config, const Manifest& manifest, const std::string& dir,
               const Vocab* vocab, LoadReport* report) {
    config_ = config;
    manifest_ = manifest;
    docs_ = load_coref_docs(data_file(dir, manifest, "documents"), report);
    split_ = manifest.resolve(config.fold);
    check_split(split_, docs_.size());
    std::vector<std::vector<std::string>> streams;
    for (std::size_t i : split_.train) streams.push_back(docs_[i].tokens);
    for (const auto& s : streams) train_surfaces_.insert(s.begin(), s.end());
    vocab_ = vocab != nullptr ? *vocab : build_vocab(streams, vocab_options(config));
    for (auto& d : docs_) assign_ids(d, vocab_);
    CorefModelConfig mc;
    mc.vocab_size = vocab_.size();
    mc.embed_dim = config.embed_dim;
    mc.hidden_dim = config.hidden_dim;
    mc.attention_dim = config.attention_dim;
    mc.use_reference = config.use_reference;
    model_ = std::make_unique<CorefModel>(mc, config.seed);
  }

  ParameterSet& parameters() override { return model_->parameters(); }
  const ParameterSet& parameters() const override { return model_->parameters(); }
  std::size_t corpus_size() const override { return docs_.size(); }

  Tensor example_nll(std::size_t index) const override {
    return model_->document_nll(docs_.at(index));
  }

  std::vector<TokenScore> score_example(std::size_t index) const override {
    const auto& doc = docs_.at(index);
    const auto lps = model_->token_log_probs(doc);
    std::vector<TokenScore> out;
    for (std::size_t i = 0; i < lps.size(); ++i) {
      TokenScore s;
      s.log_prob = lps[i];
      s.reference = doc.mentions[i].has_value();
      s.oov = train_surfaces_.count(doc.tokens[i]) == 0;
      out.push_back(s);
    }
    return out;
  }

  std::vector<GeneratedUtterance> generate(std::size_t, const BeamOptions&) const override {
    throw std::invalid_argument("generation is only available for recipes and dialogue");
  }

  HeatMap heatmap(std::size_t index, std::size_t begin, std::size_t end,
                  std::vector<std::string>* warnings) const override {
    if (!config_.use_reference) {
      throw std::invalid_argument("the model has no entity attention to visualize");
    }
    const auto& doc = docs_.at(index);
    const auto trace = model_->trace(doc);
    const auto [b, e] = clip_range(begin, end, trace.size(), warnings);
    std::size_t slots = 1;
    for (std::size_t i = b; i < e; ++i) slots = std::max(slots, trace[i].entity_count);
    HeatMap map;
    map.row_labels.push_back("p(z=1)");
    map.row_labels.push_back("entity:new");
    for (std::size_t k = 1; k < slots; ++k) {
      map.row_labels.push_back("entity:" + std::to_string(k));
    }
    map.values.assign(map.row_labels.size(), {});
    for (std::size_t i = b; i < e; ++i) {
      map.column_labels.push_back(step_label(i, doc.tokens[i]));
      map.values[0].push_back(trace[i].switch_prob);
      for (std::size_t k = 0; k < slots; ++k) {
        map.values[k + 1].push_back(k < trace[i].entity_probs.size()
                                        ? trace[i].entity_probs[k]
                                        : 0.0);
      }
    }
    return map;
  }

 private:
  std::vector<AnnotatedDocument> docs_;
  std::unique_ptr<CorefModel> model_;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::unique_ptr<Session> open_session(const TrainConfig& config, const std::string& data_dir,
                                      const Vocab* vocab, LoadReport* report) {
  config.validate();
  const Manifest manifest = load_manifest(data_dir);
  if (manifest.task != config.task) {
    throw std::invalid_argument(std::string("data directory holds a ") +
                                task_kind_name(manifest.task) + " corpus but the task is " +
                                task_kind_name(config.task));
  }
  switch (config.task) {
    case TaskKind::kRecipes:
      return std::make_unique<RecipeSession>(config, manifest, data_dir, vocab, report);
    case TaskKind::kDialogue:
      return std::make_unique<DialogueSession>(config, manifest, data_dir, vocab, report);
    case TaskKind::kCoref:
      return std::make_unique<CorefSession>(config, manifest, data_dir, vocab, report);
  }
  throw std::logic_error("unhandled task");
}

double subset_nll(const Session& session, Subset subset) {
  const auto& idx = session.subset(subset);
  const auto values = parallel_map(idx.size(), session.config().threads, [&](std::size_t i) {
    NoRecordScope no_record;
    return session.example_nll(idx[i]).item();
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

TrainResult train_session(Session& session,
                          const std::function<void(const EpochLog&)>& on_epoch) {
  const TrainConfig& config = session.config();
  if (!config.init_checkpoint.empty()) {
    const auto copied = load_matching(session.parameters(), config.init_checkpoint);
    if (copied.empty()) {
      throw std::runtime_error("init checkpoint " + config.init_checkpoint +
                               " shares no parameters with the model");
    }
  }
  const auto& train = session.subset(Subset::kTrain);
  TrainProblem problem;
  problem.train_size = train.size();
  problem.loss = [&](std::size_t i) { return session.example_nll(train[i]); };
  const Subset held_out =
      session.subset(Subset::kValidation).empty() ? Subset::kTrain : Subset::kValidation;
  problem.validation_nll = [&session, held_out] { return subset_nll(session, held_out); };
  return train_parameters(session.parameters(), problem, config, on_epoch);
}

std::vector<TokenScore> score_subset(const Session& session, Subset subset) {
  const auto& idx = session.subset(subset);
  const auto per_example = parallel_map(idx.size(), session.config().threads,
                                        [&](std::size_t i) { return session.score_example(idx[i]); });
  std::vector<TokenScore> out;
  for (const auto& scores : per_example) out.insert(out.end(), scores.begin(), scores.end());
  return out;
}

PerplexityReport evaluate_session(const Session& session, Subset subset) {
  return perplexity_report(score_subset(session, subset));
}

double session_bleu(const Session& session, Subset subset, const BeamOptions& options) {
  const auto& idx = session.subset(subset);
  const auto outputs = parallel_map(idx.size(), session.config().threads,
                                    [&](std::size_t i) { return session.generate(idx[i], options); });
  std::vector<TokenSequence> candidates, references;
  for (const auto& gens : outputs) {
    for (const auto& g : gens) {
      candidates.push_back(g.tokens);
      references.push_back(g.reference);
    }
  }
  return corpus_bleu(candidates, references);
}

std::string eval_report_json(const Session& session, Subset subset,
                             const PerplexityReport& report) {
  nlohmann::json obj;
  obj["build"] = build_id();
  obj["config"] = nlohmann::json::parse(config_to_json(session.config()));
  obj["subset"] = subset_name(subset);
  obj["examples"] = session.subset(subset).size();
  obj["perplexity"] = nlohmann::json::parse(perplexity_json(report));
  obj["token_accounting"] =
      session.config().task == TaskKind::kCoref
          ? "every document token; mentions score the joint of word and decisions"
          : "every target token plus one end-of-sequence token per generated text";
  return obj.dump(2) + "\n";
}

void save_model(const std::string& model_dir, const Session& session,
                const TrainResult* result) {
  fs::create_directories(model_dir);
  const fs::path dir(model_dir);
  save_checkpoint(session.parameters(), (dir / kCheckpointFile).string());
  session.vocab().save((dir / kVocabFile).string());
  write_text(dir / kConfigFile, config_to_json(session.config()));
  if (result != nullptr) write_text(dir / kTrainLogFile, format_train_log(*result));
}

std::unique_ptr<Session> load_model(const std::string& model_dir,
                                    const std::string& data_dir) {
  const fs::path dir(model_dir);
  const TrainConfig config = config_from_json(read_text(dir / kConfigFile));
  const Vocab vocab = Vocab::load((dir / kVocabFile).string());
  auto session = open_session(config, data_dir, &vocab);
  load_checkpoint(session->parameters(), (dir / kCheckpointFile).string());
  return session;
}

}  // namespace reflm
