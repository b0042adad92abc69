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

#include "reflm/corpus/splits.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace reflm {

using nlohmann::json;

TaskKind parse_task_kind(const std::string& text) {
  if (text == "recipes") return TaskKind::kRecipes;
  if (text == "dialogue") return TaskKind::kDialogue;
  if (text == "coref") return TaskKind::kCoref;
  throw std::invalid_argument("unknown task '" + text +
                              "' (expected recipes, dialogue or coref)");
}

const char* task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kRecipes:
      return "recipes";
    case TaskKind::kDialogue:
      return "dialogue";
    case TaskKind::kCoref:
      return "coref";
  }
  return "?";
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

SplitIndices make_split(std::size_t n, std::uint64_t seed, const SplitRatios& ratios) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      ratios.train + ratios.validation + ratios.test <= 0) {
    throw std::invalid_argument("split ratios must be non-negative with a positive sum");
  }
  const double total = ratios.train + ratios.validation + ratios.test;
  const auto n_valid =
      static_cast<std::size_t>(std::round(static_cast<double>(n) * ratios.validation / total));
  const auto n_test =
      static_cast<std::size_t>(std::round(static_cast<double>(n) * ratios.test / total));
  if (n_valid + n_test > n) throw std::invalid_argument("corpus too small to split");
  const auto order = shuffled(n, seed);
  SplitIndices s;
  s.validation.assign(order.begin(), order.begin() + static_cast<long>(n_valid));
  s.test.assign(order.begin() + static_cast<long>(n_valid),
                order.begin() + static_cast<long>(n_valid + n_test));
  s.train.assign(order.begin() + static_cast<long>(n_valid + n_test), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<std::size_t> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("fold count must be positive");
  const auto order = shuffled(n, seed);
  std::vector<std::size_t> folds(n);
  for (std::size_t i = 0; i < n; ++i) folds[order[i]] = i % k;
  return folds;
}

SplitIndices fold_split(const std::vector<std::size_t>& folds, std::size_t k,
                        std::size_t fold) {
  if (k < 3) throw std::invalid_argument("cross-validation needs at least 3 folds");
  if (fold >= k) {
    throw std::invalid_argument("fold " + std::to_string(fold) + " outside [0, " +
                                std::to_string(k) + ")");
  }
  const std::size_t valid_fold = (fold + 1) % k;
  SplitIndices s;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (folds[i] >= k) throw std::invalid_argument("fold id outside range");
    if (folds[i] == fold) {
      s.test.push_back(i);
    } else if (folds[i] == valid_fold) {
      s.validation.push_back(i);
    } else {
      s.train.push_back(i);
    }
  }
  return s;
}

SplitIndices Manifest::resolve(std::size_t fold) const {
  if (!folds.empty()) return fold_split(folds, fold_count, fold);
  if (!split) throw std::runtime_error("manifest has neither a split nor folds");
  return *split;
}

std::string manifest_to_json(const Manifest& m) {
  json obj;
  obj["task"] = task_kind_name(m.task);
  obj["seed"] = m.seed;
  obj["count"] = m.count;
  obj["files"] = m.files;
  if (m.split) {
    obj["split"] = {{"train", m.split->train},
                    {"validation", m.split->validation},
                    {"test", m.split->test}};
  }
  if (!m.folds.empty()) {
    obj["folds"] = m.folds;
    obj["fold_count"] = m.fold_count;
  }
  return obj.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  const json obj = json::parse(text);
  Manifest m;
  m.task = parse_task_kind(obj.at("task").get<std::string>());
  m.seed = obj.value("seed", std::uint64_t{0});
  m.count = obj.at("count").get<std::size_t>();
  m.files = obj.at("files").get<std::map<std::string, std::string>>();
  if (obj.contains("split")) {
    const auto& s = obj.at("split");
    m.split = SplitIndices{s.at("train").get<std::vector<std::size_t>>(),
                           s.at("validation").get<std::vector<std::size_t>>(),
                           s.at("test").get<std::vector<std::size_t>>()};
    for (const auto* part : {&m.split->train, &m.split->validation, &m.split->test}) {
      for (std::size_t i : *part) {
        if (i >= m.count) throw std::runtime_error("split index outside corpus");
      }
    }
  }
  if (obj.contains("folds")) {
    m.folds = obj.at("folds").get<std::vector<std::size_t>>();
    m.fold_count = obj.at("fold_count").get<std::size_t>();
    if (m.folds.size() != m.count) {
      throw std::runtime_error("fold list does not cover the corpus");
    }
  }
  return m;
}

void save_manifest(const std::string& dir, const Manifest& manifest) {
  const auto path = std::filesystem::path(dir) / kManifestFile;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest_to_json(manifest);
}

Manifest load_manifest(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / kManifestFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return manifest_from_json(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace reflm
