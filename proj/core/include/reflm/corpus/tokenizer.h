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

#ifndef REFLM_CORPUS_TOKENIZER_H_
#define REFLM_CORPUS_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace reflm {

// Lowercases ASCII letters, splits on whitespace, and emits every ASCII
// punctuation character other than '_' as its own token. Bytes >= 0x80 are
// word characters, so UTF-8 text passes through unsplit.
std::vector<std::string> tokenize(std::string_view text);

// Lowercases one pre-split token and replaces any whitespace with '_'.
std::string normalize_token(std::string_view token);

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::string_view separator = " ");

}  // namespace reflm

#endif  // REFLM_CORPUS_TOKENIZER_H_
