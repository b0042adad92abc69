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

#include "reflm/corpus/dialogue.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "reflm/corpus/tokenizer.h"

namespace reflm {

using nlohmann::json;

namespace {

std::vector<std::string> parse_csv_record(std::istream& in, bool& ok) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (quoted) throw std::runtime_error("unterminated quoted CSV field");
  ok = any;
  if (any) fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string special_prefix(const std::string& attribute) {
  if (attribute == "name") return "_NAME_";
  if (attribute == "address" || attribute == "addr") return "_ADDR_";
  if (attribute == "postcode") return "_POSTCODE_";
  if (attribute == "phone") return "_PHONE_";
  return {};
}

}  // namespace

RawTable read_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read table " + path);
  RawTable table;
  bool ok = false;
  table.header = parse_csv_record(in, ok);
  if (!ok || table.header.empty()) throw std::runtime_error("table " + path + " is empty");
  std::size_t line = 1;
  while (true) {
    auto rec = parse_csv_record(in, ok);
    ++line;
    if (!ok) break;
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() != table.header.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line) + ": expected " +
                               std::to_string(table.header.size()) + " fields, got " +
                               std::to_string(rec.size()));
    }
    table.rows.push_back(std::move(rec));
  }
  return table;
}

void write_table_csv(const std::string& path, const RawTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write table " + path);
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_field(row[i]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& r : table.rows) write_row(r);
}

std::vector<RawDialogue> read_dialogue_jsonl(const std::string& path,
                                             LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dialogue file " + path);
  std::vector<RawDialogue> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (report != nullptr) ++report->lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      RawDialogue d;
      for (const auto& t : obj.at("turns")) {
        const std::string speaker = t.at("speaker").get<std::string>();
        RawTurn turn;
        if (speaker == "M") {
          turn.speaker = Speaker::kMachine;
        } else if (speaker == "U") {
          turn.speaker = Speaker::kUser;
        } else {
          throw std::runtime_error("unknown speaker '" + speaker + "'");
        }
        turn.text = t.at("text").get<std::string>();
        d.turns.push_back(std::move(turn));
      }
      out.push_back(std::move(d));
    } catch (const std::exception& e) {
      if (report != nullptr) {
        ++report->skipped_lines;
        report->warnings.push_back(path + ":" + std::to_string(line_no) +
                                   ": malformed dialogue: " + e.what());
      }
    }
  }
  return out;
}

void write_dialogue_jsonl(const std::string& path,
                          const std::vector<RawDialogue>& dialogues) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dialogue file " + path);
  for (const auto& d : dialogues) {
    json turns = json::array();
    for (const auto& t : d.turns) {
      turns.push_back({{"speaker", t.speaker == Speaker::kMachine ? "M" : "U"},
                       {"text", t.text}});
    }
    out << json{{"turns", turns}}.dump() << '\n';
  }
}

void TableSubstitution::add(std::vector<std::string> pattern, std::string replacement) {
  if (pattern.empty()) return;
  for (const auto& [p, r] : rules_) {
    if (p == pattern) {
      if (r != replacement) {
        throw std::invalid_argument("table text '" + join_tokens(pattern) +
                                    "' maps to both " + r + " and " + replacement);
      }
      return;
    }
  }
  rules_.emplace_back(std::move(pattern), std::move(replacement));
  std::stable_sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
}

std::vector<std::string> TableSubstitution::apply(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::pair<std::vector<std::string>, std::string>* hit = nullptr;
    for (const auto& rule : rules_) {
      const auto& p = rule.first;
      if (p.size() <= tokens.size() - i &&
          std::equal(p.begin(), p.end(), tokens.begin() + static_cast<long>(i))) {
        hit = &rule;
        break;
      }
    }
    if (hit != nullptr) {
      out.push_back(hit->second);
      i += hit->first.size();
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

PreparedTable prepare_table(const RawTable& raw) {
  if (raw.header.empty() || raw.rows.empty()) {
    throw std::invalid_argument("table needs a header and at least one row");
  }
  PreparedTable out;
  auto table = std::make_shared<DatabaseTable>();
  std::vector<std::string> prefixes;
  for (const auto& h : raw.header) {
    const auto toks = tokenize(h);
    if (toks.empty()) throw std::invalid_argument("empty table attribute name");
    const std::string attr = join_tokens(toks, "_");
    table->attribute_tokens.push_back(attr);
    prefixes.push_back(special_prefix(attr));
  }
  std::set<std::vector<std::string>> names;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    if (row.size() != raw.header.size()) {
      throw std::invalid_argument("table row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " cells");
    }
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < row.size(); ++c) {
      auto toks = tokenize(row[c]);
      if (c == 0 && !toks.empty() && !names.insert(toks).second) {
        throw std::invalid_argument("duplicate restaurant name '" + row[c] + "'");
      }
      std::string cell;
      if (toks.empty()) {
        cell = Vocab::reserved()[Vocab::kEmpty];
      } else if (!prefixes[c].empty()) {
        cell = prefixes[c] + std::to_string(r + 1);
      } else {
        cell = join_tokens(toks, "_");
      }
      if (!toks.empty()) out.substitution.add(std::move(toks), cell);
      cells.push_back(std::move(cell));
    }
    table->cell_tokens.push_back(std::move(cells));
  }
  out.table = std::move(table);
  return out;
}

DialogueExample make_dialogue_example(const RawDialogue& raw,
                                      const PreparedTable& table) {
  DialogueExample ex;
  ex.table = table.table;
  for (std::size_t t = 0; t < raw.turns.size(); ++t) {
    const RawTurn& turn = raw.turns[t];
    const Speaker expected = t % 2 == 0 ? Speaker::kMachine : Speaker::kUser;
    if (turn.speaker != expected) {
      throw std::invalid_argument("turn " + std::to_string(t) +
                                  " breaks machine/user alternation");
    }
    Utterance u;
    u.speaker = turn.speaker;
    u.tokens = table.substitution.apply(tokenize(turn.text));
    if (u.tokens.empty()) {
      throw std::invalid_argument("turn " + std::to_string(t) + " is empty");
    }
    if (u.speaker == Speaker::kMachine) {
      for (const auto& tok : u.tokens) {
        u.cell_candidates.push_back(table.table->matching_cells(tok));
        u.copy_labels.push_back(u.cell_candidates.back().empty() ? 0 : 1);
      }
    }
    ex.turns.push_back(std::move(u));
  }
  if (ex.turns.empty()) throw std::invalid_argument("dialogue has no turns");
  return ex;
}

std::vector<std::string> table_tokens(const DatabaseTable& table) {
  std::vector<std::string> out = table.attribute_tokens;
  for (const auto& row : table.cell_tokens) out.insert(out.end(), row.begin(), row.end());
  return out;
}

void assign_ids(DatabaseTable& table, const Vocab& vocab) {
  table.attributes = vocab.encode(table.attribute_tokens);
  table.cells.clear();
  for (const auto& row : table.cell_tokens) table.cells.push_back(vocab.encode(row));
}

void assign_ids(DialogueExample& example, const Vocab& vocab) {
  for (auto& u : example.turns) u.ids = vocab.encode(u.tokens);
}

DialogueCorpus load_dialogues(const std::string& dialogue_path,
                              const std::string& table_path,
                              const VocabOptions& vocab_options,
                              const std::optional<std::vector<std::size_t>>& vocab_examples,
                              LoadReport* report) {
  PreparedTable prepared = prepare_table(read_table_csv(table_path));
  DialogueCorpus corpus;
  corpus.table = prepared.table;
  std::size_t index = 0;
  for (const auto& raw : read_dialogue_jsonl(dialogue_path, report)) {
    try {
      corpus.examples.push_back(make_dialogue_example(raw, prepared));
    } catch (const std::exception& e) {
      if (report != nullptr) {
        ++report->dropped_examples;
        report->warnings.push_back("dialogue " + std::to_string(index) +
                                   " rejected: " + e.what());
      }
    }
    ++index;
  }

  std::vector<std::vector<std::string>> streams;
  auto add_example = [&](const DialogueExample& ex) {
    for (const auto& u : ex.turns) streams.push_back(u.tokens);
  };
  if (vocab_examples) {
    for (std::size_t i : *vocab_examples) {
      if (i >= corpus.examples.size()) {
        throw std::out_of_range("vocabulary example index " + std::to_string(i) +
                                " outside corpus");
      }
      add_example(corpus.examples[i]);
    }
  } else {
    for (const auto& ex : corpus.examples) add_example(ex);
  }
  VocabOptions options = vocab_options;
  std::set<std::string> seen;
  std::vector<std::string> forced;
  for (auto& t : table_tokens(*corpus.table)) {
    if (seen.insert(t).second) forced.push_back(t);
  }
  forced.insert(forced.end(), vocab_options.forced.begin(), vocab_options.forced.end());
  options.forced = std::move(forced);
  corpus.vocab = build_vocab(streams, options);

  assign_ids(*corpus.table, corpus.vocab);
  for (auto& ex : corpus.examples) assign_ids(ex, corpus.vocab);
  return corpus;
}

}  // namespace reflm
