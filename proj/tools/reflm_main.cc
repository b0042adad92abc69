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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reflm/corpus/coref_docs.h"
#include "reflm/corpus/dialogue.h"
#include "reflm/corpus/recipes.h"
#include "reflm/corpus/splits.h"
#include "reflm/corpus/synthetic.h"
#include "reflm/harness/bleu.h"
#include "reflm/harness/config.h"
#include "reflm/harness/session.h"

namespace fs = std::filesystem;

namespace {

struct ConfigFlags {
  std::string task = "recipes";
  std::string mode = "supervised";
  reflm::TrainConfig config;
  std::string config_file;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Expands `--config FILE` into one --key=value argument per line of FILE,
// placed before the command-line flags and skipping keys given there.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  auto given = [&](const std::string& key) {
    for (const auto& a : args) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (!given(key)) extra.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  // Right after the subcommand name.
  const std::size_t pos = std::min<std::size_t>(2, args.size());
  args.insert(args.begin() + static_cast<long>(pos), extra.begin(), extra.end());
  return args;
}

void add_config_flags(CLI::App* app, ConfigFlags& f) {
  auto& c = f.config;
  app->add_option("--task", f.task, "recipes, dialogue or coref")->capture_default_str();
  app->add_option("--hidden_dim", c.hidden_dim)->capture_default_str();
  app->add_option("--embed_dim", c.embed_dim)->capture_default_str();
  app->add_option("--attention_dim", c.attention_dim)->capture_default_str();
  app->add_option("--learning_rate", c.learning_rate)->capture_default_str();
  app->add_option("--lr_decay", c.lr_decay)->capture_default_str();
  app->add_option("--clip_norm", c.clip_norm)->capture_default_str();
  app->add_option("--epochs", c.epochs)->capture_default_str();
  app->add_option("--batch_size", c.batch_size)->capture_default_str();
  app->add_option("--seed", c.seed)->capture_default_str();
  app->add_option("--mode", f.mode, "supervised or latent")->capture_default_str();
  app->add_option("--sentence_attention", c.sentence_attention)->capture_default_str();
  app->add_option("--use_reference", c.use_reference)->capture_default_str();
  app->add_option("--init_checkpoint", c.init_checkpoint);
  app->add_option("--max_vocab", c.max_vocab, "0 keeps every token")->capture_default_str();
  app->add_option("--min_count", c.min_count)->capture_default_str();
  app->add_option("--fold", c.fold)->capture_default_str();
  app->add_option("--threads", c.threads)->capture_default_str();
  app->add_option("--config", f.config_file,
                  "flat key=value file supplying any flag; the command line wins");
}

reflm::TrainConfig resolve(const ConfigFlags& f) {
  reflm::TrainConfig c = f.config;
  c.task = reflm::parse_task_kind(f.task);
  c.mode = reflm::parse_training_mode(f.mode);
  c.validate();
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void report_load(const reflm::LoadReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
}

// Copies user-supplied corpus files into `out` and writes a manifest.
reflm::Manifest prepare_files(reflm::TaskKind task, const std::string& out,
                              const std::map<std::string, std::string>& inputs,
                              std::uint64_t seed, std::size_t folds) {
  fs::create_directories(out);
  reflm::Manifest m;
  m.task = task;
  m.seed = seed;
  for (const auto& [role, path] : inputs) {
    if (path.empty()) throw std::invalid_argument("missing --" + role + " input file");
    const std::string name = role + fs::path(path).extension().string();
    fs::copy_file(path, fs::path(out) / name, fs::copy_options::overwrite_existing);
    m.files[role] = name;
  }
  reflm::LoadReport report;
  const auto file = [&](const std::string& role) {
    return (fs::path(out) / m.files.at(role)).string();
  };
  switch (task) {
    case reflm::TaskKind::kRecipes:
      m.count = reflm::load_recipes(file("recipes"), &report).size();
      break;
    case reflm::TaskKind::kDialogue:
      m.count = reflm::load_dialogues(file("dialogues"), file("table"), {}, std::nullopt,
                                      &report)
                    .examples.size();
      break;
    case reflm::TaskKind::kCoref:
      m.count = reflm::load_coref_docs(file("documents"), &report).size();
      break;
  }
  report_load(report);
  if (task == reflm::TaskKind::kDialogue) {
    m.folds = reflm::make_folds(m.count, folds, seed);
    m.fold_count = folds;
  } else {
    m.split = reflm::make_split(m.count, seed);
  }
  reflm::save_manifest(out, m);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-aware language models: data preparation, training and evaluation", "reflm"};
  app.set_version_flag("--version", std::string(reflm::build_id()));
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "write a data directory with a manifest");
  std::string prep_task = "recipes", prep_out;
  bool synthetic = false;
  std::uint64_t prep_seed = 1;
  std::size_t prep_count = 0, prep_folds = 5;
  std::string recipes_in, dialogues_in, table_in, documents_in;
  prepare->add_option("--task", prep_task, "recipes, dialogue or coref")->capture_default_str();
  prepare->add_option("--out", prep_out, "output data directory")->required();
  prepare->add_flag("--synthetic", synthetic, "generate a synthetic corpus");
  prepare->add_option("--seed", prep_seed)->capture_default_str();
  prepare->add_option("--count", prep_count, "synthetic examples (recipes, coref)");
  prepare->add_option("--folds", prep_folds, "dialogue cross-validation folds")
      ->capture_default_str();
  prepare->add_option("--recipes", recipes_in, "recipe JSON-lines file");
  prepare->add_option("--dialogues", dialogues_in, "dialogue JSON-lines file");
  prepare->add_option("--table", table_in, "restaurant table CSV");
  prepare->add_option("--documents", documents_in, "coref JSON-lines file");

  // train
  auto* train = app.add_subcommand("train", "train a model and save it");
  ConfigFlags train_flags;
  std::string train_data, train_model;
  train->add_option("--data", train_data, "prepared data directory")->required();
  train->add_option("--model", train_model, "output model directory")->required();
  add_config_flags(train, train_flags);

  // eval
  auto* eval = app.add_subcommand("eval", "per-class perplexity report as JSON");
  std::string eval_data, eval_model, eval_subset = "test", eval_out;
  std::size_t eval_threads = 0;
  eval->add_option("--data", eval_data)->required();
  eval->add_option("--model", eval_model)->required();
  eval->add_option("--subset", eval_subset)->capture_default_str();
  eval->add_option("--output", eval_out, "write the report here instead of stdout");
  eval->add_option("--threads", eval_threads, "override the evaluation threads");

  // generate
  auto* gen = app.add_subcommand("generate", "beam-decode texts and score BLEU");
  std::string gen_data, gen_model, gen_subset = "test";
  reflm::BeamOptions beam;
  std::size_t gen_limit = 0;
  gen->add_option("--data", gen_data)->required();
  gen->add_option("--model", gen_model)->required();
  gen->add_option("--subset", gen_subset)->capture_default_str();
  gen->add_option("--beam_width", beam.beam_width)->capture_default_str();
  gen->add_option("--max_len", beam.max_len)->capture_default_str();
  gen->add_option("--limit", gen_limit, "decode at most this many examples");

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "export attention heat maps as CSV");
  std::string heat_data, heat_model, heat_subset = "test", heat_out;
  std::size_t heat_example = 0, heat_begin = 0;
  std::size_t heat_end = reflm::kAllSteps;
  heat->add_option("--data", heat_data)->required();
  heat->add_option("--model", heat_model)->required();
  heat->add_option("--subset", heat_subset)->capture_default_str();
  heat->add_option("--example", heat_example, "position within the subset")
      ->capture_default_str();
  heat->add_option("--begin", heat_begin, "first decoding step")->capture_default_str();
  heat->add_option("--end", heat_end, "one past the last decoding step");
  heat->add_option("--output", heat_out, "CSV file")->required();

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "reflm: " << e.what() << "\n";
    return 1;
  }
  // CLI11 takes the arguments in reverse order, without the program name.
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*prepare) {
      const auto task = reflm::parse_task_kind(prep_task);
      reflm::Manifest m;
      if (synthetic) {
        reflm::SyntheticOptions opts;
        if (prep_count != 0) {
          opts.recipes.count = prep_count;
          opts.coref.count = prep_count;
        }
        opts.dialogue.fold_count = prep_folds;
        m = reflm::write_synthetic(task, prep_out, prep_seed, opts);
      } else {
        std::map<std::string, std::string> inputs;
        if (task == reflm::TaskKind::kRecipes) inputs["recipes"] = recipes_in;
        if (task == reflm::TaskKind::kDialogue) {
          inputs["dialogues"] = dialogues_in;
          inputs["table"] = table_in;
        }
        if (task == reflm::TaskKind::kCoref) inputs["documents"] = documents_in;
        m = prepare_files(task, prep_out, inputs, prep_seed, prep_folds);
      }
      std::cout << "prepared " << m.count << " " << reflm::task_kind_name(m.task)
                << " examples in " << prep_out << "\n";
    } else if (*train) {
      const auto config = resolve(train_flags);
      reflm::LoadReport report;
      auto session = reflm::open_session(config, train_data, nullptr, &report);
      report_load(report);
      std::cerr << "vocabulary " << session->vocab().size() << ", parameters "
                << session->parameters().scalar_count() << ", train "
                << session->split().train.size() << ", validation "
                << session->split().validation.size() << "\n";
      const auto result = reflm::train_session(*session, [](const reflm::EpochLog& e) {
        std::cerr << "epoch " << e.epoch << " lr " << e.learning_rate << " train_nll "
                  << e.train_nll << " validation_nll " << e.validation_nll
                  << (e.improved ? " *" : "") << "\n";
      });
      reflm::save_model(train_model, *session, &result);
      std::cout << "best epoch " << result.best_epoch << ", model saved to " << train_model
                << "\n";
    } else if (*eval) {
      auto session = reflm::load_model(eval_model, eval_data);
      if (eval_threads != 0) {
        reflm::TrainConfig c = session->config();
        c.threads = eval_threads;
        session = reflm::open_session(c, eval_data, &session->vocab());
        reflm::load_checkpoint(session->parameters(),
                               (fs::path(eval_model) / reflm::kCheckpointFile).string());
      }
      const auto subset = reflm::parse_subset(eval_subset);
      const auto report = reflm::evaluate_session(*session, subset);
      const std::string json = reflm::eval_report_json(*session, subset, report);
      if (eval_out.empty()) {
        std::cout << json;
      } else {
        write_file(eval_out, json);
      }
    } else if (*gen) {
      auto session = reflm::load_model(gen_model, gen_data);
      const auto& idx = session->subset(reflm::parse_subset(gen_subset));
      const std::size_t n = gen_limit == 0 ? idx.size() : std::min(gen_limit, idx.size());
      std::vector<reflm::TokenSequence> cands, refs;
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& g : session->generate(idx[i], beam)) {
          std::cout << idx[i] << "\t" << g.log_prob << "\t";
          for (std::size_t k = 0; k < g.tokens.size(); ++k) {
            std::cout << (k ? " " : "") << g.tokens[k];
          }
          std::cout << "\n";
          cands.push_back(g.tokens);
          refs.push_back(g.reference);
        }
      }
      if (!cands.empty()) std::cout << "BLEU\t" << reflm::corpus_bleu(cands, refs) << "\n";
    } else if (*heat) {
      auto session = reflm::load_model(heat_model, heat_data);
      const auto& idx = session->subset(reflm::parse_subset(heat_subset));
      if (heat_example >= idx.size()) {
        throw std::invalid_argument("--example " + std::to_string(heat_example) +
                                    " outside a subset of " + std::to_string(idx.size()));
      }
      std::vector<std::string> warnings;
      const auto map = session->heatmap(idx[heat_example], heat_begin, heat_end, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      write_file(heat_out, reflm::heatmap_csv(map));
    }
  } catch (const std::exception& e) {
    std::cerr << "reflm: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
