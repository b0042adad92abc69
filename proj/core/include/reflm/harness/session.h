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

#ifndef REFLM_HARNESS_SESSION_H_
#define REFLM_HARNESS_SESSION_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reflm/corpus/recipes.h"
#include "reflm/corpus/splits.h"
#include "reflm/corpus/vocab.h"
#include "reflm/harness/beam.h"
#include "reflm/harness/config.h"
#include "reflm/harness/heatmap.h"
#include "reflm/harness/perplexity.h"
#include "reflm/harness/trainer.h"
#include "reflm/numcore/parameters.h"

namespace reflm {

enum class Subset { kTrain, kValidation, kTest };
Subset parse_subset(const std::string& text);
const char* subset_name(Subset subset);

struct GeneratedUtterance {
  std::vector<std::string> tokens;
  double log_prob = 0.0;
  std::vector<std::string> reference;
};

// A loaded corpus, its vocabulary and split, and a model for one task.
class Session {
 public:
  virtual ~Session() = default;

  const TrainConfig& config() const { return config_; }
  const Vocab& vocab() const { return vocab_; }
  const Manifest& manifest() const { return manifest_; }
  const SplitIndices& split() const { return split_; }
  const std::vector<std::size_t>& subset(Subset s) const;
  // Surface tokens that occur in the training split.
  const std::set<std::string>& training_surfaces() const { return train_surfaces_; }

  virtual ParameterSet& parameters() = 0;
  virtual const ParameterSet& parameters() const = 0;
  virtual std::size_t corpus_size() const = 0;

  // Training objective of corpus example `index` under the configured mode.
  virtual Tensor example_nll(std::size_t index) const = 0;
  // Per-token log probabilities with class membership, in text order.
  virtual std::vector<TokenScore> score_example(std::size_t index) const = 0;
  // Beam-decodes every generated text of the example (the recipe, or each
  // machine utterance given the true history).
  virtual std::vector<GeneratedUtterance> generate(std::size_t index,
                                                   const BeamOptions& options) const = 0;
  // Decoding steps [begin, end) of the example, clipped to the available
  // range with a warning. kAllSteps as `end` means the last step, silently.
  virtual HeatMap heatmap(std::size_t index, std::size_t begin, std::size_t end,
                          std::vector<std::string>* warnings) const = 0;

 protected:
  TrainConfig config_;
  Manifest manifest_;
  SplitIndices split_;
  Vocab vocab_;
  std::set<std::string> train_surfaces_;
};

// Loads the corpus described by `data_dir`/manifest.json. The vocabulary is
// built from the training split unless one is supplied.
std::unique_ptr<Session> open_session(const TrainConfig& config,
                                      const std::string& data_dir,
                                      const Vocab* vocab = nullptr,
                                      LoadReport* report = nullptr);

// Copies matching parameters from config.init_checkpoint (if set), then
// trains on the training split with validation-based checkpoint selection.
TrainResult train_session(Session& session,
                          const std::function<void(const EpochLog&)>& on_epoch = {});

// Total NLL of a subset under the configured objective, without recording.
double subset_nll(const Session& session, Subset subset);

std::vector<TokenScore> score_subset(const Session& session, Subset subset);
PerplexityReport evaluate_session(const Session& session, Subset subset);

// Corpus BLEU of beam outputs against the reference texts of a subset.
double session_bleu(const Session& session, Subset subset, const BeamOptions& options);

// JSON report: config echo, build id, subset, per-class perplexity.
std::string eval_report_json(const Session& session, Subset subset,
                             const PerplexityReport& report);

inline constexpr std::size_t kAllSteps = static_cast<std::size_t>(-1);

inline constexpr const char* kCheckpointFile = "model.ckpt";
inline constexpr const char* kVocabFile = "vocab.txt";
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kTrainLogFile = "train_log.tsv";

// Writes model.ckpt, vocab.txt, config.json and (when given) train_log.tsv.
void save_model(const std::string& model_dir, const Session& session,
                const TrainResult* result = nullptr);
std::unique_ptr<Session> load_model(const std::string& model_dir,
                                    const std::string& data_dir);

}  // namespace reflm

#endif  // REFLM_HARNESS_SESSION_H_
