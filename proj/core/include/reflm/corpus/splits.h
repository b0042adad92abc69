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

#ifndef REFLM_CORPUS_SPLITS_H_
#define REFLM_CORPUS_SPLITS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reflm {

enum class TaskKind { kRecipes, kDialogue, kCoref };

TaskKind parse_task_kind(const std::string& text);
const char* task_kind_name(TaskKind kind);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  friend bool operator==(const SplitIndices&, const SplitIndices&) = default;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Seeded shuffle of [0, n) cut by the ratios. Each part is sorted.
SplitIndices make_split(std::size_t n, std::uint64_t seed, const SplitRatios& ratios = {});

// Fold id in [0, k) per example; fold sizes differ by at most one.
std::vector<std::size_t> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

// Fold `fold` is the test set, fold (fold + 1) % k the validation set, the
// rest is training data. k must be at least 3.
SplitIndices fold_split(const std::vector<std::size_t>& folds, std::size_t k,
                        std::size_t fold);

// Describes a prepared data directory.
struct Manifest {
  TaskKind task = TaskKind::kRecipes;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  // Role -> file name relative to the directory: "recipes", "dialogues",
  // "table" or "documents".
  std::map<std::string, std::string> files;
  std::optional<SplitIndices> split;
  std::vector<std::size_t> folds;
  std::size_t fold_count = 0;

  // The configured split, or the fold split when folds are present.
  SplitIndices resolve(std::size_t fold) const;
};

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);
void save_manifest(const std::string& dir, const Manifest& manifest);
Manifest load_manifest(const std::string& dir);

inline constexpr const char* kManifestFile = "manifest.json";

}  // namespace reflm

#endif  // REFLM_CORPUS_SPLITS_H_
