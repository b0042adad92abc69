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

#include "reflm/corpus/coref_docs.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "reflm/corpus/tokenizer.h"

namespace reflm {

using nlohmann::json;

std::vector<RawCorefDoc> read_coref_jsonl(const std::string& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read coref file " + path);
  std::vector<RawCorefDoc> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (report != nullptr) ++report->lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      RawCorefDoc doc;
      doc.tokens = obj.at("tokens").get<std::vector<std::string>>();
      for (const auto& m : obj.value("mentions", json::array())) {
        doc.mentions.push_back({m.at("start").get<std::size_t>(),
                                m.at("end").get<std::size_t>(),
                                m.at("entity").get<long>()});
      }
      out.push_back(std::move(doc));
    } catch (const std::exception& e) {
      if (report != nullptr) {
        ++report->skipped_lines;
        report->warnings.push_back(path + ":" + std::to_string(line_no) +
                                   ": malformed document: " + e.what());
      }
    }
  }
  return out;
}

void write_coref_jsonl(const std::string& path, const std::vector<RawCorefDoc>& docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write coref file " + path);
  for (const auto& d : docs) {
    json mentions = json::array();
    for (const auto& m : d.mentions) {
      mentions.push_back({{"start", m.start}, {"end", m.end}, {"entity", m.entity}});
    }
    out << json{{"tokens", d.tokens}, {"mentions", mentions}}.dump() << '\n';
  }
}

AnnotatedDocument preprocess_coref(const RawCorefDoc& raw) {
  std::vector<std::string> tokens;
  tokens.reserve(raw.tokens.size());
  for (const auto& t : raw.tokens) tokens.push_back(normalize_token(t));

  std::vector<RawMention> mentions = raw.mentions;
  for (const auto& m : mentions) {
    if (m.start >= m.end || m.end > tokens.size()) {
      throw std::invalid_argument("mention span [" + std::to_string(m.start) + ", " +
                                  std::to_string(m.end) + ") outside document");
    }
  }
  std::sort(mentions.begin(), mentions.end(),
            [](const RawMention& a, const RawMention& b) {
              return a.start != b.start ? a.start < b.start : a.end < b.end;
            });
  for (std::size_t i = 1; i < mentions.size(); ++i) {
    if (mentions[i].start < mentions[i - 1].end) {
      throw std::invalid_argument(
          "overlapping mentions [" + std::to_string(mentions[i - 1].start) + ", " +
          std::to_string(mentions[i - 1].end) + ") and [" +
          std::to_string(mentions[i].start) + ", " + std::to_string(mentions[i].end) +
          ")");
    }
  }

  std::map<long, std::size_t> mention_count;
  std::map<long, std::map<std::string, std::size_t>> token_count;
  for (const auto& m : mentions) {
    ++mention_count[m.entity];
    for (std::size_t i = m.start; i < m.end; ++i) ++token_count[m.entity][tokens[i]];
  }
  std::map<long, std::string> head;
  for (const auto& [entity, counts] : token_count) {
    // Map order is lexicographic, so the first strict maximum wins ties.
    std::string best;
    std::size_t best_n = 0;
    for (const auto& [tok, n] : counts) {
      if (n > best_n) {
        best = tok;
        best_n = n;
      }
    }
    head[entity] = best;
  }

  AnnotatedDocument doc;
  std::map<long, std::size_t> dense;
  std::size_t next = 0;
  for (const auto& m : mentions) {
    if (mention_count[m.entity] < 2) continue;
    for (; next < m.start; ++next) {
      doc.tokens.push_back(tokens[next]);
      doc.mentions.push_back(std::nullopt);
    }
    auto [it, inserted] = dense.emplace(m.entity, dense.size() + 1);
    doc.tokens.push_back(head[m.entity]);
    doc.mentions.push_back(it->second);
    next = m.end;
  }
  for (; next < tokens.size(); ++next) {
    doc.tokens.push_back(tokens[next]);
    doc.mentions.push_back(std::nullopt);
  }
  return doc;
}

std::vector<AnnotatedDocument> load_coref_docs(const std::string& path,
                                               LoadReport* report) {
  std::vector<AnnotatedDocument> out;
  std::size_t index = 0;
  for (const auto& raw : read_coref_jsonl(path, report)) {
    try {
      AnnotatedDocument doc = preprocess_coref(raw);
      if (doc.tokens.empty()) throw std::invalid_argument("empty document");
      out.push_back(std::move(doc));
    } catch (const std::exception& e) {
      if (report != nullptr) {
        ++report->dropped_examples;
        report->warnings.push_back("document " + std::to_string(index) +
                                   " rejected: " + e.what());
      }
    }
    ++index;
  }
  return out;
}

void assign_ids(AnnotatedDocument& doc, const Vocab& vocab) {
  doc.ids = vocab.encode(doc.tokens);
}

}  // namespace reflm
