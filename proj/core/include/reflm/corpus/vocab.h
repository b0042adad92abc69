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

#ifndef REFLM_CORPUS_VOCAB_H_
#define REFLM_CORPUS_VOCAB_H_

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace reflm {

// Token <-> id map whose first four ids are reserved.
class Vocab {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kBos = 1;
  static constexpr std::size_t kEos = 2;
  static constexpr std::size_t kEmpty = 3;
  static const std::array<std::string, 4>& reserved();

  // Reserved tokens only.
  Vocab();
  // `tokens` must start with the reserved tokens and hold no duplicates.
  static Vocab from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  bool contains(const std::string& token) const;
  // Unknown tokens map to kUnk.
  std::size_t id(const std::string& token) const;
  const std::string& token(std::size_t id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<std::size_t> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const std::vector<std::size_t>& ids) const;

  // One token per line in id order.
  std::string serialize() const;
  static Vocab parse(const std::string& text);
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct VocabOptions {
  // Total size including the reserved tokens; must exceed their count.
  std::size_t max_size = std::numeric_limits<std::size_t>::max();
  // Tokens seen fewer times are left out.
  std::size_t min_count = 1;
  // Added right after the reserved tokens regardless of frequency.
  std::vector<std::string> forced;
};

// Keeps the most frequent tokens (ties broken lexicographically) up to the
// cap. Reserved tokens in the streams are not counted.
Vocab build_vocab(const std::vector<std::vector<std::string>>& streams,
                  const VocabOptions& options = {});

}  // namespace reflm

#endif  // REFLM_CORPUS_VOCAB_H_
