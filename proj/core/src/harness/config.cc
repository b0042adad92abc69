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

#include "reflm/harness/config.h"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#ifndef REFLM_BUILD_ID
#define REFLM_BUILD_ID "unknown"
#endif

namespace reflm {

using nlohmann::json;

void TrainConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("invalid " + field + ": " + why);
  };
  if (hidden_dim == 0) fail("hidden_dim", "must be positive");
  if (embed_dim == 0) fail("embed_dim", "must be positive");
  if (attention_dim == 0) fail("attention_dim", "must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate", "must be a positive finite number");
  }
  if (!(lr_decay > 0.0) || lr_decay > 1.0) fail("lr_decay", "must lie in (0, 1]");
  if (!(clip_norm > 0.0)) fail("clip_norm", "must be positive");
  if (batch_size == 0) fail("batch_size", "must be positive");
  if (threads == 0) fail("threads", "must be positive");
  if (max_vocab != 0 && max_vocab <= 4) fail("max_vocab", "must exceed the 4 reserved tokens");
  if (min_count == 0) fail("min_count", "must be positive");
  if (task == TaskKind::kCoref && mode == TrainingMode::kLatent) {
    fail("mode", "the coref model is trained with supervised decisions only");
  }
  if (sentence_attention && task != TaskKind::kDialogue) {
    fail("sentence_attention", "only applies to the dialogue task");
  }
}

std::string config_to_json(const TrainConfig& c) {
  json obj;
  obj["task"] = task_kind_name(c.task);
  obj["hidden_dim"] = c.hidden_dim;
  obj["embed_dim"] = c.embed_dim;
  obj["attention_dim"] = c.attention_dim;
  obj["learning_rate"] = c.learning_rate;
  obj["lr_decay"] = c.lr_decay;
  obj["clip_norm"] = std::isinf(c.clip_norm) ? json("inf") : json(c.clip_norm);
  obj["epochs"] = c.epochs;
  obj["batch_size"] = c.batch_size;
  obj["seed"] = c.seed;
  obj["mode"] = training_mode_name(c.mode);
  obj["sentence_attention"] = c.sentence_attention;
  obj["use_reference"] = c.use_reference;
  obj["init_checkpoint"] = c.init_checkpoint;
  obj["max_vocab"] = c.max_vocab;
  obj["min_count"] = c.min_count;
  obj["fold"] = c.fold;
  obj["threads"] = c.threads;
  return obj.dump(2) + "\n";
}

TrainConfig config_from_json(const std::string& text) {
  const json obj = json::parse(text);
  TrainConfig c;
  c.task = parse_task_kind(obj.at("task").get<std::string>());
  c.hidden_dim = obj.at("hidden_dim").get<std::size_t>();
  c.embed_dim = obj.at("embed_dim").get<std::size_t>();
  c.attention_dim = obj.at("attention_dim").get<std::size_t>();
  c.learning_rate = obj.at("learning_rate").get<double>();
  c.lr_decay = obj.at("lr_decay").get<double>();
  const json& clip = obj.at("clip_norm");
  c.clip_norm = clip.is_string() ? std::numeric_limits<double>::infinity()
                                 : clip.get<double>();
  c.epochs = obj.at("epochs").get<std::size_t>();
  c.batch_size = obj.at("batch_size").get<std::size_t>();
  c.seed = obj.at("seed").get<std::uint64_t>();
  c.mode = parse_training_mode(obj.at("mode").get<std::string>());
  c.sentence_attention = obj.at("sentence_attention").get<bool>();
  c.use_reference = obj.at("use_reference").get<bool>();
  c.init_checkpoint = obj.at("init_checkpoint").get<std::string>();
  c.max_vocab = obj.at("max_vocab").get<std::size_t>();
  c.min_count = obj.at("min_count").get<std::size_t>();
  c.fold = obj.at("fold").get<std::size_t>();
  c.threads = obj.at("threads").get<std::size_t>();
  c.validate();
  return c;
}

const char* build_id() { return REFLM_BUILD_ID; }

}  // namespace reflm
