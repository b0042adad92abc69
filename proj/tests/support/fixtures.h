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

#ifndef REFLM_TESTS_SUPPORT_FIXTURES_H_
#define REFLM_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>

#include "reflm/corpus/coref_docs.h"
#include "reflm/corpus/dialogue.h"
#include "reflm/corpus/recipes.h"
#include "reflm/corpus/vocab.h"

namespace reflm::testing {

// Small hand-built examples with ids assigned against their own vocab.
struct RecipeFixture {
  RecipeExample example;
  Vocab vocab;
};
RecipeFixture tiny_recipe();

struct DialogueFixture {
  DialogueExample example;
  PreparedTable prepared;
  Vocab vocab;
};
DialogueFixture tiny_dialogue();

struct DocumentFixture {
  AnnotatedDocument doc;
  Vocab vocab;
};
DocumentFixture tiny_document();

// Id-level examples sized for gradient checks: 2 ingredients and a 3-token
// recipe over vocab 8; a 2x3 table with a machine/user/machine dialogue over
// vocab 16; a 5-token document with one entity over vocab 8.
RecipeExample minimal_recipe();
DialogueExample minimal_dialogue();
AnnotatedDocument minimal_document();

// Fresh directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);

}  // namespace reflm::testing

#endif  // REFLM_TESTS_SUPPORT_FIXTURES_H_
