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

#include "reflm/harness/perplexity.h"

#include <cmath>

#include "json.hpp"

namespace reflm {
namespace {

void add(ClassPerplexity& c, double log_prob) {
  ++c.count;
  c.total_log_prob += log_prob;
}

void finish(ClassPerplexity& c) {
  if (c.count > 0) {
    c.perplexity = std::exp(-c.total_log_prob / static_cast<double>(c.count));
  }
}

nlohmann::json class_json(const ClassPerplexity& c) {
  nlohmann::json obj;
  obj["count"] = c.count;
  obj["perplexity"] = c.perplexity ? nlohmann::json(*c.perplexity) : nlohmann::json();
  if (c.perplexity && std::isinf(*c.perplexity)) obj["perplexity"] = "inf";
  return obj;
}

}  // namespace

PerplexityReport perplexity_report(const std::vector<TokenScore>& scores) {
  PerplexityReport r;
  for (const auto& s : scores) {
    add(r.all, s.log_prob);
    if (s.reference) {
      add(r.reference, s.log_prob);
      if (s.oov) add(r.reference_oov, s.log_prob);
    } else {
      add(r.word, s.log_prob);
    }
  }
  finish(r.all);
  finish(r.reference);
  finish(r.word);
  finish(r.reference_oov);
  return r;
}

std::string perplexity_json(const PerplexityReport& report, int indent) {
  nlohmann::json obj;
  obj["all"] = class_json(report.all);
  obj["reference"] = class_json(report.reference);
  obj["word"] = class_json(report.word);
  obj["reference_oov"] = class_json(report.reference_oov);
  return obj.dump(indent);
}

}  // namespace reflm
