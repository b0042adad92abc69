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

#include "reflm/corpus/vocab.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace reflm {

const std::array<std::string, 4>& Vocab::reserved() {
  static const std::array<std::string, 4> kReserved = {"<unk>", "<s>", "</s>",
                                                       "_EMPTY"};
  return kReserved;
}

Vocab::Vocab() {
  for (const auto& t : reserved()) {
    index_.emplace(t, tokens_.size());
    tokens_.push_back(t);
  }
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  const auto& res = reserved();
  if (tokens.size() < res.size() || !std::equal(res.begin(), res.end(), tokens.begin())) {
    throw std::invalid_argument("vocabulary must start with the reserved tokens");
  }
  Vocab v;
  v.tokens_.clear();
  v.index_.clear();
  for (auto& t : tokens) {
    if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("invalid vocabulary token '" + t + "'");
    }
    if (!v.index_.emplace(t, v.tokens_.size()).second) {
      throw std::invalid_argument("duplicate vocabulary token '" + t + "'");
    }
    v.tokens_.push_back(std::move(t));
  }
  return v;
}

bool Vocab::contains(const std::string& token) const {
  return index_.count(token) != 0;
}

std::size_t Vocab::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(std::size_t id) const {
  if (id >= tokens_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary");
  }
  return tokens_[id];
}

std::vector<std::size_t> Vocab::encode(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

std::vector<std::string> Vocab::decode(const std::vector<std::size_t>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(token(i));
  return out;
}

std::string Vocab::serialize() const {
  std::string out;
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocab Vocab::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    tokens.push_back(line);
  }
  return from_tokens(std::move(tokens));
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write vocabulary " + path);
  out << serialize();
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocabulary " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Vocab build_vocab(const std::vector<std::vector<std::string>>& streams,
                  const VocabOptions& options) {
  const auto& res = Vocab::reserved();
  if (options.max_size <= res.size()) {
    throw std::invalid_argument("vocabulary cap must exceed the reserved tokens");
  }
  const std::set<std::string> reserved_set(res.begin(), res.end());
  std::vector<std::string> tokens(res.begin(), res.end());
  std::set<std::string> taken(res.begin(), res.end());
  for (const auto& t : options.forced) {
    if (taken.insert(t).second) tokens.push_back(t);
  }
  if (tokens.size() > options.max_size) {
    throw std::invalid_argument("forced vocabulary tokens exceed the cap");
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& stream : streams) {
    for (const auto& t : stream) {
      if (reserved_set.count(t) == 0) ++counts[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (const auto& [t, n] : counts) {
    if (n >= options.min_count && taken.count(t) == 0) ranked.emplace_back(t, n);
  }
  // std::map iteration is lexicographic, so a stable sort keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [t, n] : ranked) {
    if (tokens.size() >= options.max_size) break;
    tokens.push_back(t);
  }
  return Vocab::from_tokens(std::move(tokens));
}

}  // namespace reflm
