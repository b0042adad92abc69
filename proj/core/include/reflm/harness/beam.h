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

#ifndef REFLM_HARNESS_BEAM_H_
#define REFLM_HARNESS_BEAM_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace reflm {

struct BeamOptions {
  std::size_t beam_width = 10;
  std::size_t max_len = 50;
  std::size_t eos = 2;
  // EOS is not allowed before this many symbols have been emitted.
  std::size_t min_len = 1;
};

struct Hypothesis {
  std::vector<std::size_t> tokens;  // excludes the EOS symbol
  double log_prob = 0.0;            // includes log p(EOS) when finished
  bool finished = false;            // ended with EOS rather than max_len
};

namespace detail {

// Higher score first; ties go to the lexicographically smaller sequence.
template <typename H>
bool better(const H& a, const H& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  if (a.finished != b.finished) return a.finished;
  return a.tokens < b.tokens;
}

}  // namespace detail

// Length-bounded beam search. `expand(state, prev)` consumes the previous
// symbol and returns the next state together with log probabilities over all
// symbols. Each step keeps the best `beam_width` extensions; those ending in
// EOS are set aside. Results are ranked by total log probability.
template <typename State, typename Expand>
std::vector<Hypothesis> beam_search(const State& initial, std::size_t first_symbol,
                                    Expand&& expand, const BeamOptions& options) {
  if (options.beam_width == 0) throw std::invalid_argument("beam width must be >= 1");
  struct Live {
    std::vector<std::size_t> tokens;
    double log_prob;
    bool finished;
    State state;
    std::size_t prev;
  };
  std::vector<Live> beams = {{{}, 0.0, false, initial, first_symbol}};
  std::vector<Hypothesis> done;
  for (std::size_t t = 0; t < options.max_len && !beams.empty(); ++t) {
    std::vector<Live> candidates;
    for (const Live& b : beams) {
      auto [next, log_probs] = expand(b.state, b.prev);
      for (std::size_t s = 0; s < log_probs.size(); ++s) {
        if (s == options.eos && t < options.min_len) continue;
        if (std::isnan(log_probs[s]) || log_probs[s] == -INFINITY) continue;
        Live c{b.tokens, b.log_prob + log_probs[s], s == options.eos, next, s};
        if (!c.finished) c.tokens.push_back(s);
        candidates.push_back(std::move(c));
      }
    }
    const std::size_t keep = std::min(options.beam_width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(keep),
                      candidates.end(), detail::better<Live>);
    candidates.resize(keep);
    beams.clear();
    for (Live& c : candidates) {
      if (c.finished) {
        done.push_back({std::move(c.tokens), c.log_prob, true});
      } else {
        beams.push_back(std::move(c));
      }
    }
    // Scores only decrease, so stop once the kept finished hypotheses beat
    // every live one.
    if (done.size() >= options.beam_width && !beams.empty()) {
      std::sort(done.begin(), done.end(), detail::better<Hypothesis>);
      if (done[options.beam_width - 1].log_prob >= beams.front().log_prob) beams.clear();
    }
  }
  for (Live& b : beams) done.push_back({std::move(b.tokens), b.log_prob, false});
  std::sort(done.begin(), done.end(), detail::better<Hypothesis>);
  if (done.size() > options.beam_width) done.resize(options.beam_width);
  return done;
}

// Picks the most probable symbol at every step (lowest index on ties).
template <typename State, typename Expand>
Hypothesis greedy_decode(const State& initial, std::size_t first_symbol, Expand&& expand,
                         const BeamOptions& options) {
  Hypothesis h;
  State state = initial;
  std::size_t prev = first_symbol;
  for (std::size_t t = 0; t < options.max_len; ++t) {
    auto [next, log_probs] = expand(state, prev);
    std::size_t best = log_probs.size();
    for (std::size_t s = 0; s < log_probs.size(); ++s) {
      if (s == options.eos && t < options.min_len) continue;
      if (std::isnan(log_probs[s]) || log_probs[s] == -INFINITY) continue;
      if (best == log_probs.size() || log_probs[s] > log_probs[best]) best = s;
    }
    if (best == log_probs.size()) break;
    h.log_prob += log_probs[best];
    if (best == options.eos) {
      h.finished = true;
      break;
    }
    h.tokens.push_back(best);
    state = std::move(next);
    prev = best;
  }
  return h;
}

}  // namespace reflm

#endif  // REFLM_HARNESS_BEAM_H_
