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

#include "reflm/numcore/parameters.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reflm {
namespace {

constexpr char kMagic[8] = {'R', 'F', 'L', 'M', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw std::runtime_error("checkpoint truncated at byte " +
                               std::to_string(pos_));
    }
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Tensor ParameterSet::add(const std::string& name, Tensor value) {
  if (index_.count(name) != 0) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  value.set_requires_grad(true);
  index_[name] = entries_.size();
  entries_.emplace_back(name, value);
  return value;
}

bool ParameterSet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

const Tensor& ParameterSet::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter named " + name);
  return entries_[it->second].second;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

std::vector<Tensor> ParameterSet::tensors() const {
  std::vector<Tensor> out;
  out.reserve(entries_.size());
  for (const auto& [name, t] : entries_) out.push_back(t);
  return out;
}

void ParameterSet::zero_grads() {
  for (auto& [name, t] : entries_) t.zero_grad();
}

double ParameterSet::grad_norm() const {
  double total = 0.0;
  for (const auto& [name, t] : entries_) {
    if (!t.has_grad()) continue;
    for (double g : t.node()->grad) total += g * g;
  }
  return std::sqrt(total);
}

std::vector<std::vector<double>> ParameterSet::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(entries_.size());
  for (const auto& [name, t] : entries_) out.push_back(t.to_vector());
  return out;
}

void ParameterSet::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != entries_.size()) {
    throw std::invalid_argument("snapshot does not match parameter set");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    Tensor& t = entries_[i].second;
    if (values[i].size() != t.size()) {
      throw std::invalid_argument("snapshot size mismatch for " + entries_[i].first);
    }
    std::copy(values[i].begin(), values[i].end(), t.mutable_data().begin());
  }
}

std::vector<std::string> ParameterSet::copy_matching(const ParameterSet& source) {
  std::vector<std::string> copied;
  for (auto& [name, t] : entries_) {
    if (!source.contains(name)) continue;
    const Tensor& src = source.get(name);
    if (src.shape() != t.shape()) continue;
    std::copy(src.data().begin(), src.data().end(), t.mutable_data().begin());
    copied.push_back(name);
  }
  return copied;
}

Tensor Initializer::uniform(Shape shape, double bound) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> data(shape_size(shape));
  for (double& v : data) v = dist(rng_);
  return Tensor::from(std::move(shape), std::move(data));
}

Tensor Initializer::constant(Shape shape, double value) {
  std::vector<double> data(shape_size(shape), value);
  return Tensor::from(std::move(shape), std::move(data));
}

std::string serialize_checkpoint(const ParameterSet& params) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, params.size());
  for (const auto& [name, t] : params.entries()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put<std::uint64_t>(out, d);
    for (double v : t.data()) put<double>(out, v);
  }
  return out;
}

std::vector<CheckpointEntry> parse_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.get_string(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw std::runtime_error("not a reflm checkpoint (bad magic)");
  }
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  const auto count = in.get<std::uint64_t>();
  std::vector<CheckpointEntry> entries;
  for (std::uint64_t e = 0; e < count; ++e) {
    CheckpointEntry entry;
    entry.name = in.get_string(in.get<std::uint32_t>());
    const auto rank = in.get<std::uint32_t>();
    for (std::uint32_t r = 0; r < rank; ++r) {
      entry.shape.push_back(static_cast<std::size_t>(in.get<std::uint64_t>()));
    }
    entry.data.resize(shape_size(entry.shape));
    for (double& v : entry.data) v = in.get<double>();
    entries.push_back(std::move(entry));
  }
  if (!in.done()) throw std::runtime_error("trailing bytes after checkpoint");
  return entries;
}

void save_checkpoint(const ParameterSet& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  const std::string bytes = serialize_checkpoint(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);
}

std::vector<CheckpointEntry> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

void load_checkpoint(ParameterSet& params, const std::string& path) {
  std::map<std::string, CheckpointEntry> by_name;
  for (auto& e : read_checkpoint(path)) by_name[e.name] = std::move(e);
  for (const auto& [name, t] : params.entries()) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw std::runtime_error("checkpoint " + path + " lacks parameter " + name);
    }
    if (it->second.shape != t.shape()) {
      throw std::runtime_error("checkpoint shape " + shape_string(it->second.shape) +
                               " for " + name + " does not match " +
                               shape_string(t.shape()));
    }
    Tensor dst = t;
    std::copy(it->second.data.begin(), it->second.data.end(),
              dst.mutable_data().begin());
  }
}

std::vector<std::string> load_matching(ParameterSet& params,
                                       const std::string& path) {
  std::vector<std::string> copied;
  std::map<std::string, CheckpointEntry> by_name;
  for (auto& e : read_checkpoint(path)) by_name[e.name] = std::move(e);
  for (const auto& [name, t] : params.entries()) {
    auto it = by_name.find(name);
    if (it == by_name.end() || it->second.shape != t.shape()) continue;
    Tensor dst = t;
    std::copy(it->second.data.begin(), it->second.data.end(),
              dst.mutable_data().begin());
    copied.push_back(name);
  }
  return copied;
}

}  // namespace reflm
