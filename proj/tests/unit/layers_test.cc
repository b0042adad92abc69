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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "reflm/layers/attention.h"
#include "reflm/layers/embedding.h"
#include "reflm/layers/lstm.h"
#include "reflm/numcore/grad_check.h"
#include "reflm/numcore/ops.h"

namespace reflm {
namespace {

double sigmoid_d(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return Tensor::vector(std::move(v));
}

void randomize(ParameterSet& params, std::uint64_t seed, double scale = 0.8) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  for (const auto& [name, t] : params.entries()) {
    Tensor p = t;
    for (double& v : p.mutable_data()) v = d(rng);
  }
}

TEST(Lstm, ParameterShapesAndInitialization) {
  ParameterSet ps;
  Initializer init(1);
  LstmParams p = LstmParams::create(ps, "enc", 3, 4, init);
  for (const Tensor* w : {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell}) {
    EXPECT_EQ(w->shape(), (Shape{4, 7}));
    for (double v : w->data()) EXPECT_LE(std::abs(v), 0.1);
  }
  for (double v : p.b_forget.data()) EXPECT_EQ(v, 1.0);
  for (double v : p.b_input.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(ps.size(), 8u);
}

TEST(Lstm, ZeroParametersGiveZeroHidden) {
  ParameterSet ps;
  Initializer init(1);
  LstmParams p = LstmParams::create(ps, "enc", 2, 3, init);
  randomize(ps, 0, 0.0);
  LstmState s = lstm_step(p, Tensor::vector({5.0, -7.0}), p.zero_state());
  for (double v : s.hidden.data()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, HiddenIsBoundedByOne) {
  ParameterSet ps;
  Initializer init(2);
  LstmParams p = LstmParams::create(ps, "enc", 3, 5, init);
  randomize(ps, 3, 3.0);
  std::mt19937_64 rng(4);
  LstmState s = p.zero_state();
  for (int t = 0; t < 20; ++t) {
    s = lstm_step(p, random_vector(rng, 3, 5.0), s);
    for (double v : s.hidden.data()) {
      EXPECT_GT(v, -1.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

// Gate equations recomputed element by element.
TEST(Lstm, TwoDimensionalStepMatchesHandRecomputation) {
  ParameterSet ps;
  Initializer init(5);
  LstmParams p = LstmParams::create(ps, "enc", 2, 2, init);
  randomize(ps, 6);
  const std::vector<double> x = {0.3, -0.8}, h = {0.1, 0.5}, c = {-0.2, 0.4};
  LstmState prev{Tensor::vector(h), Tensor::vector(c)};
  LstmState next = lstm_step(p, Tensor::vector(x), prev);

  const std::vector<double> xh = {x[0], x[1], h[0], h[1]};
  auto gate = [&](const Tensor& w, const Tensor& b, std::size_t row) {
    double z = b[row];
    for (std::size_t k = 0; k < 4; ++k) z += w[row * 4 + k] * xh[k];
    return z;
  };
  for (std::size_t r = 0; r < 2; ++r) {
    const double i = sigmoid_d(gate(p.w_input, p.b_input, r));
    const double f = sigmoid_d(gate(p.w_forget, p.b_forget, r));
    const double o = sigmoid_d(gate(p.w_output, p.b_output, r));
    const double g = std::tanh(gate(p.w_cell, p.b_cell, r));
    const double cell = f * c[r] + i * g;
    EXPECT_NEAR(next.cell[r], cell, 1e-12);
    EXPECT_NEAR(next.hidden[r], o * std::tanh(cell), 1e-12);
  }
}

TEST(Lstm, DimensionMismatchIsRejected) {
  ParameterSet ps;
  Initializer init(1);
  LstmParams p = LstmParams::create(ps, "enc", 2, 3, init);
  EXPECT_THROW(lstm_step(p, Tensor::vector({1.0, 2.0, 3.0}), p.zero_state()),
               std::invalid_argument);
}

class EncoderTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Initializer init(9);
    emb = EmbeddingTable::create(ps, "emb", 10, 3, init);
    lstm = LstmParams::create(ps, "enc", 3, 4, init);
    randomize(ps, 10);
  }
  ParameterSet ps;
  EmbeddingTable emb;
  LstmParams lstm;
};

TEST_F(EncoderTest, SingleTokenHasOneStateEqualToFinal) {
  const std::vector<std::size_t> tokens = {4};
  EncodedSequence e = encode_sequence(lstm, emb, tokens);
  ASSERT_EQ(e.hiddens.size(), 1u);
  EXPECT_EQ(e.hiddens[0].to_vector(), e.final.hidden.to_vector());
}

TEST_F(EncoderTest, PrefixEncodingMatchesFullEncoding) {
  const std::vector<std::size_t> full = {1, 5, 2, 9, 3};
  EncodedSequence all = encode_sequence(lstm, emb, full);
  for (std::size_t k = 1; k < full.size(); ++k) {
    EncodedSequence prefix =
        encode_sequence(lstm, emb, std::span<const std::size_t>(full.data(), k));
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(prefix.hiddens[i].to_vector(), all.hiddens[i].to_vector());
    }
  }
  EXPECT_EQ(all.hiddens.back().to_vector(), all.final.hidden.to_vector());
}

TEST_F(EncoderTest, RepeatedRunsAreBitwiseIdentical) {
  const std::vector<std::size_t> tokens = {7, 7, 0, 2};
  EncodedSequence a = encode_sequence(lstm, emb, tokens);
  EncodedSequence b = encode_sequence(lstm, emb, tokens);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    EXPECT_EQ(a.hiddens[i].to_vector(), b.hiddens[i].to_vector());
  }
}

TEST_F(EncoderTest, EmptySequenceAndBadIdsAreRejected) {
  EXPECT_THROW(encode_sequence(lstm, emb, std::vector<std::size_t>{}), std::invalid_argument);
  EXPECT_THROW(emb.lookup(10), std::out_of_range);
}

TEST_F(EncoderTest, InitialStateIsUsed) {
  const std::vector<std::size_t> tokens = {3};
  LstmState init{Tensor::vector({0.5, 0.5, 0.5, 0.5}), Tensor::vector({1, 1, 1, 1})};
  EXPECT_NE(encode_sequence(lstm, emb, tokens, init).final.hidden.to_vector(),
            encode_sequence(lstm, emb, tokens).final.hidden.to_vector());
}

TEST_F(EncoderTest, PassesGradientCheck) {
  const std::vector<std::size_t> tokens = {1, 5, 2};
  GradCheckOptions o;
  o.tolerance = 1e-5;
  auto r = grad_check([&] { return sum(encode_sequence(lstm, emb, tokens).final.hidden); },
                      ps.tensors(), o);
  EXPECT_TRUE(r.passed) << r.max_relative_error;
}

class AttentionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Initializer init(12);
    att = AttentionParams::create(ps, "att", 4, 3, 5, init);
    randomize(ps, 13);
  }
  ParameterSet ps;
  AttentionParams att;
  std::mt19937_64 rng{14};
};

TEST_F(AttentionTest, ShapesFollowConfiguration) {
  EXPECT_EQ(att.w_key.shape(), (Shape{5, 4}));
  EXPECT_EQ(att.w_query.shape(), (Shape{5, 3}));
  EXPECT_EQ(att.score.shape(), (Shape{5}));
}

TEST_F(AttentionTest, SingleKeyGetsAllMass) {
  const std::vector<Tensor> keys = {random_vector(rng, 4)};
  Tensor p = attend(att, keys, random_vector(rng, 3));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST_F(AttentionTest, IdenticalKeysGiveUniformDistribution) {
  Tensor k = random_vector(rng, 4);
  const std::vector<Tensor> keys = {k, k, k};
  Tensor p = attend(att, keys, random_vector(rng, 3));
  for (double v : p.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST_F(AttentionTest, OutputMatchesScoreFormula) {
  const std::vector<Tensor> keys = {random_vector(rng, 4), random_vector(rng, 4)};
  Tensor q = random_vector(rng, 3);
  Tensor p = attend(att, keys, q);
  std::vector<double> scores;
  for (const Tensor& k : keys) {
    double s = 0.0;
    for (std::size_t a = 0; a < 5; ++a) {
      double z = 0.0;
      for (std::size_t j = 0; j < 4; ++j) z += att.w_key[a * 4 + j] * k[j];
      for (std::size_t j = 0; j < 3; ++j) z += att.w_query[a * 3 + j] * q[j];
      s += att.score[a] * std::tanh(z);
    }
    scores.push_back(s);
  }
  const double z = std::exp(scores[0]) + std::exp(scores[1]);
  EXPECT_NEAR(p[0], std::exp(scores[0]) / z, 1e-12);
  EXPECT_NEAR(p[1], std::exp(scores[1]) / z, 1e-12);
}

TEST_F(AttentionTest, PermutingKeysPermutesOutput) {
  std::vector<Tensor> keys = {random_vector(rng, 4), random_vector(rng, 4),
                              random_vector(rng, 4), random_vector(rng, 4)};
  Tensor q = random_vector(rng, 3);
  Tensor p = attend(att, keys, q);
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<Tensor> permuted;
  for (std::size_t i : perm) permuted.push_back(keys[i]);
  Tensor pp = attend(att, permuted, q);
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_NEAR(pp[i], p[perm[i]], 1e-15);
}

// Adds an attention unit with zero key weights: its tanh term is the same
// for every key, so every score moves by the same constant.
TEST_F(AttentionTest, ConstantScoreShiftLeavesOutputUnchanged) {
  const std::vector<Tensor> keys = {random_vector(rng, 4), random_vector(rng, 4),
                                    random_vector(rng, 4)};
  Tensor q = random_vector(rng, 3);
  Tensor base = attend(att, keys, q);

  ParameterSet wide_ps;
  Initializer init(15);
  AttentionParams wide = AttentionParams::create(wide_ps, "wide", 4, 3, 6, init);
  auto wk = wide.w_key.mutable_data();
  auto wq = wide.w_query.mutable_data();
  auto sc = wide.score.mutable_data();
  for (std::size_t i = 0; i < 20; ++i) wk[i] = att.w_key[i];
  for (std::size_t i = 0; i < 15; ++i) wq[i] = att.w_query[i];
  for (std::size_t i = 0; i < 5; ++i) sc[i] = att.score[i];
  for (std::size_t j = 0; j < 4; ++j) wk[20 + j] = 0.0;
  for (std::size_t j = 0; j < 3; ++j) wq[15 + j] = 0.7;
  sc[5] = 3.0;

  Tensor shifted = attend(wide, keys, q);
  for (std::size_t i = 0; i < keys.size(); ++i) EXPECT_NEAR(shifted[i], base[i], 1e-15);
}

TEST_F(AttentionTest, EmptyKeySetAndBadDimsAreRejected) {
  EXPECT_THROW(attend(att, std::vector<Tensor>{}, random_vector(rng, 3)),
               std::invalid_argument);
  const std::vector<Tensor> keys = {random_vector(rng, 2)};
  EXPECT_THROW(attend(att, keys, random_vector(rng, 3)), std::invalid_argument);
}

TEST_F(AttentionTest, PassesGradientCheck) {
  const std::vector<Tensor> keys = {random_vector(rng, 4), random_vector(rng, 4),
                                    random_vector(rng, 4)};
  Tensor q = random_vector(rng, 3);
  Tensor w = random_vector(rng, 3);
  GradCheckOptions o;
  o.tolerance = 1e-5;
  auto r = grad_check([&] { return sum(mul(attend(att, keys, q), w)); }, ps.tensors(), o);
  EXPECT_TRUE(r.passed) << r.max_relative_error;
}

}  // namespace
}  // namespace reflm
