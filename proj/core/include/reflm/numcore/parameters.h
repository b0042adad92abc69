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

#ifndef REFLM_NUMCORE_PARAMETERS_H_
#define REFLM_NUMCORE_PARAMETERS_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "reflm/numcore/tensor.h"

namespace reflm {

// Named, ordered collection of trainable tensors. Names are dot-delimited
// paths such as "recipe.decoder.lstm.W_f". Iteration order is insertion
// order, which fixes the checkpoint byte layout.
class ParameterSet {
 public:
  // Registers a leaf; it is marked requires_grad. Duplicate names throw.
  Tensor add(const std::string& name, Tensor value);

  bool contains(const std::string& name) const;
  const Tensor& get(const std::string& name) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  const std::vector<std::pair<std::string, Tensor>>& entries() const {
    return entries_;
  }
  std::vector<Tensor> tensors() const;

  void zero_grads();
  double grad_norm() const;

  // Deep copy of all values, used for best-checkpoint retention.
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

  // Copies values for every name present in both sets with equal shapes.
  // Returns the names that were copied.
  std::vector<std::string> copy_matching(const ParameterSet& source);

 private:
  std::vector<std::pair<std::string, Tensor>> entries_;
  std::map<std::string, std::size_t> index_;
};

// Deterministic parameter initialization.
class Initializer {
 public:
  explicit Initializer(std::uint64_t seed) : rng_(seed) {}
  Tensor uniform(Shape shape, double bound = 0.1);
  Tensor constant(Shape shape, double value);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Binary checkpoint: the 8-byte magic "RFLMCKPT", a uint32 format version,
// a uint64 entry count, then per entry: uint32 name length, name bytes,
// uint32 rank, uint64 dims, and row-major IEEE-754 doubles. All integers and
// doubles are little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointEntry {
  std::string name;
  Shape shape;
  std::vector<double> data;
};

std::string serialize_checkpoint(const ParameterSet& params);
std::vector<CheckpointEntry> parse_checkpoint(const std::string& bytes);

void save_checkpoint(const ParameterSet& params, const std::string& path);
std::vector<CheckpointEntry> read_checkpoint(const std::string& path);

// Loads every parameter of `params` from the file; missing names or shape
// mismatches throw.
void load_checkpoint(ParameterSet& params, const std::string& path);

// Copies whichever entries match by name and shape; returns their names.
std::vector<std::string> load_matching(ParameterSet& params,
                                       const std::string& path);

}  // namespace reflm

#endif  // REFLM_NUMCORE_PARAMETERS_H_
