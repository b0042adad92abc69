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
#include <functional>
#include <limits>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "reflm/numcore/grad_check.h"
#include "reflm/numcore/ops.h"
#include "reflm/numcore/parameters.h"
#include "reflm/numcore/tensor.h"
#include "support/fixtures.h"

namespace reflm {
namespace {

Tensor random_tensor(std::mt19937_64& rng, Shape shape, bool grad = true,
                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> data(shape_size(shape));
  for (double& v : data) v = dist(rng);
  return Tensor::from(std::move(shape), std::move(data), grad);
}

// Contracts `out` with fixed random weights so every output coordinate
// reaches the scalar with a distinct coefficient.
Tensor contract(const Tensor& out, const Tensor& weights) {
  return sum(mul(out, weights));
}

GradCheckOptions strict() {
  GradCheckOptions o;
  o.step = 1e-5;
  o.tolerance = 1e-6;
  return o;
}

TEST(Primitives, SoftmaxOfEqualScoresIsUniform) {
  Tensor p = softmax(Tensor::vector({0.0, 0.0}));
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Primitives, SigmoidOfZeroIsHalf) {
  EXPECT_DOUBLE_EQ(sigmoid(Tensor::scalar(0.0)).item(), 0.5);
}

TEST(Primitives, OuterProductMatchesHandValues) {
  Tensor o = outer_product(Tensor::vector({0.3, 0.7}), Tensor::vector({0.5, 0.5}));
  ASSERT_EQ(o.shape(), (Shape{2, 2}));
  EXPECT_NEAR(o[0], 0.15, 1e-15);
  EXPECT_NEAR(o[1], 0.15, 1e-15);
  EXPECT_NEAR(o[2], 0.35, 1e-15);
  EXPECT_NEAR(o[3], 0.35, 1e-15);
  EXPECT_NEAR(sum(o).item(), 1.0, 1e-15);
}

TEST(Primitives, ShapeMismatchNamesPrimitiveAndShapes) {
  Tensor a = Tensor::zeros({2, 3});
  Tensor x = Tensor::zeros({2});
  try {
    matvec(a, x);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("matvec"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2,3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2]"), std::string::npos) << msg;
  }
  EXPECT_THROW(outer_product(Tensor::zeros({2, 2}), Tensor::zeros({2})), ShapeError);
  EXPECT_THROW(add(Tensor::zeros({2}), Tensor::zeros({3})), ShapeError);
}

TEST(Primitives, SoftmaxOfEmptyVectorIsRejected) {
  EXPECT_THROW(softmax(Tensor::vector({})), ShapeError);
  EXPECT_THROW(log_softmax(Tensor::vector({})), ShapeError);
}

TEST(Primitives, SoftmaxStaysFiniteForLargeScores) {
  Tensor p = softmax(Tensor::vector({1000.0, 999.0, -1000.0}));
  for (double v : p.data()) EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(sum(p).item(), 1.0, 1e-12);
  Tensor lp = log_softmax(Tensor::vector({1000.0, 999.0}));
  EXPECT_NEAR(lp[0], -std::log1p(std::exp(-1.0)), 1e-12);
}

TEST(Primitives, SigmoidAndLogSigmoidSaturateSafely) {
  EXPECT_EQ(sigmoid(Tensor::scalar(-800.0)).item(), 0.0);
  EXPECT_EQ(sigmoid(Tensor::scalar(800.0)).item(), 1.0);
  EXPECT_NEAR(log_sigmoid(Tensor::scalar(-800.0)).item(), -800.0, 1e-9);
  EXPECT_NEAR(log_sigmoid(Tensor::scalar(800.0)).item(), 0.0, 1e-12);
}

TEST(Backward, SumOfSquaresHasAnalyticGradient) {
  Tensor w = Tensor::vector({1.0, 2.0}, true);
  Tape tape;
  TapeScope scope(tape);
  backward(sum(mul(w, w)));
  EXPECT_EQ(w.grad(), (std::vector<double>{2.0, 4.0}));
}

TEST(Backward, ParametersOffThePathGetZeroGradient) {
  Tensor c = Tensor::vector({3.0}, true);
  Tensor unused = Tensor::vector({1.0, 1.0}, true);
  Tape tape;
  TapeScope scope(tape);
  backward(mul(sigmoid(Tensor::scalar(0.0)), c));
  EXPECT_DOUBLE_EQ(c.grad()[0], 0.5);
  EXPECT_EQ(unused.grad(), (std::vector<double>{0.0, 0.0}));
}

TEST(Backward, NonScalarLossIsRejected) {
  Tensor w = Tensor::vector({1.0, 2.0}, true);
  Tape tape;
  TapeScope scope(tape);
  Tensor y = mul(w, w);
  EXPECT_THROW(backward(y), std::invalid_argument);
}

TEST(Backward, GradientsAccumulateUntilReset) {
  Tensor w = Tensor::vector({1.0, -2.0}, true);
  Tape tape;
  TapeScope scope(tape);
  Tensor loss = sum(mul(w, w));
  backward(loss);
  backward(loss);
  EXPECT_EQ(w.grad(), (std::vector<double>{4.0, -8.0}));
  w.zero_grad();
  EXPECT_EQ(w.grad(), (std::vector<double>{0.0, 0.0}));
}

TEST(Backward, IsLinearInTheLoss) {
  std::mt19937_64 rng(5);
  Tensor w = random_tensor(rng, {3, 4});
  Tensor x = random_tensor(rng, {4}, false);
  auto f = [&] { return sum(tanh(matvec(w, x))); };
  auto g = [&] { return logsumexp(matvec(w, x)); };
  const double a = 0.7, b = -1.3;

  auto grad_of = [&](const std::function<Tensor()>& loss) {
    w.zero_grad();
    Tape tape;
    TapeScope scope(tape);
    backward(loss());
    return w.grad();
  };
  const auto gf = grad_of(f);
  const auto gg = grad_of(g);
  const auto gc = grad_of([&] { return add(scale(f(), a), scale(g(), b)); });
  for (std::size_t i = 0; i < gc.size(); ++i) {
    EXPECT_NEAR(gc[i], a * gf[i] + b * gg[i], 1e-12);
  }
}

TEST(Backward, NoRecordScopeBuildsNoGraph) {
  Tensor w = Tensor::vector({1.0}, true);
  Tape tape;
  TapeScope scope(tape);
  {
    NoRecordScope off;
    sum(mul(w, w));
  }
  EXPECT_EQ(tape.size(), 0u);
  sum(mul(w, w));
  EXPECT_GT(tape.size(), 0u);
}

TEST(GradCheck, QuadraticIsExact) {
  Tensor x = Tensor::scalar(3.0, true);
  auto r = grad_check([&] { return mul(x, x); }, {x}, strict());
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.worst_analytic, 6.0, 1e-12);
  EXPECT_NEAR(r.worst_numeric, 6.0, 1e-9);
}

TEST(GradCheck, SoftmaxCrossEntropyOnFiveClasses) {
  std::mt19937_64 rng(9);
  Tensor w = random_tensor(rng, {5, 3});
  Tensor x = random_tensor(rng, {3}, false);
  GradCheckOptions o = strict();
  o.tolerance = 1e-5;
  auto r = grad_check([&] { return scale(select(log_softmax(matvec(w, x)), 2), -1.0); },
                      {w}, o);
  EXPECT_TRUE(r.passed) << r.max_relative_error;
}

TEST(GradCheck, CorruptedAdjointIsCaught) {
  Tensor x = Tensor::vector({0.4, -1.1}, true);
  auto bad_square = [](const Tensor& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * a[i];
    // Deliberately wrong: drops the factor 2.
    return make_result(PrimitiveKind::kCustom, {a}, a.shape(), std::move(out),
                       [](const PrimitiveRecord& rec) {
                         Tensor in = rec.inputs[0];
                         std::span<double> g = in.mutable_grad();
                         for (std::size_t i = 0; i < rec.output.size(); ++i) {
                           g[i] += rec.output.node()->grad[i] * rec.inputs[0][i];
                         }
                       });
  };
  auto r = grad_check([&] { return sum(bad_square(x)); }, {x}, strict());
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_relative_error, 0.1);
  EXPECT_NEAR(r.worst_numeric, 2.0 * r.worst_analytic, 1e-6);
}

TEST(GradCheck, NonFiniteValueIsReportedWithCoordinate) {
  Tensor x = Tensor::vector({1.0, 0.0}, true);
  auto r = grad_check([&] { return sum(log(x)); }, {x}, strict());
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.failure.has_value());
}

TEST(GradCheck, RandomThreeLayerComposition) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor w1 = random_tensor(rng, {4, 3});
    Tensor w2 = random_tensor(rng, {5, 4});
    Tensor w3 = random_tensor(rng, {2, 5});
    Tensor x = random_tensor(rng, {3}, false);
    auto f = [&] {
      Tensor h1 = tanh(matvec(w1, x));
      Tensor h2 = sigmoid(matvec(w2, h1));
      return logsumexp(matvec(w3, h2));
    };
    auto r = grad_check(f, {w1, w2, w3}, strict());
    EXPECT_TRUE(r.passed) << "trial " << trial << " rel " << r.max_relative_error;
  }
}

struct PrimitiveCase {
  const char* name;
  std::function<void(std::mt19937_64&, std::vector<Tensor>&, std::function<Tensor()>&)> build;
};

class PrimitiveGradTest : public ::testing::TestWithParam<PrimitiveCase> {};

TEST_P(PrimitiveGradTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Tensor> params;
    std::function<Tensor()> f;
    GetParam().build(rng, params, f);
    auto r = grad_check(f, params, strict());
    EXPECT_TRUE(r.passed) << GetParam().name << " trial " << trial << " rel "
                          << r.max_relative_error;
  }
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

#define REFLM_UNARY_CASE(NAME, EXPR)                                                  \
  PrimitiveCase {                                                                      \
    NAME, [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) { \
      const std::size_t n = pick(rng, 1, 6);                                           \
      Tensor a = random_tensor(rng, {n});                                              \
      Tensor w = random_tensor(rng, {n}, false);                                       \
      ps = {a};                                                                        \
      f = [a, w] { return contract(EXPR, w); };                                        \
    }                                                                                  \
  }

const PrimitiveCase kPrimitiveCases[] = {
    {"matvec",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t m = pick(rng, 1, 5), n = pick(rng, 1, 5);
       Tensor a = random_tensor(rng, {m, n}), x = random_tensor(rng, {n});
       Tensor w = random_tensor(rng, {m}, false);
       ps = {a, x};
       f = [=] { return contract(matvec(a, x), w); };
     }},
    {"matmul",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t m = pick(rng, 1, 4), k = pick(rng, 1, 4), n = pick(rng, 1, 4);
       Tensor a = random_tensor(rng, {m, k}), b = random_tensor(rng, {k, n});
       Tensor w = random_tensor(rng, {m, n}, false);
       ps = {a, b};
       f = [=] { return contract(matmul(a, b), w); };
     }},
    {"transpose",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t m = pick(rng, 1, 4), n = pick(rng, 1, 4);
       Tensor a = random_tensor(rng, {m, n});
       Tensor w = random_tensor(rng, {n, m}, false);
       ps = {a};
       f = [=] { return contract(transpose(a), w); };
     }},
    {"add_sub_mul",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t n = pick(rng, 1, 6);
       Tensor a = random_tensor(rng, {n}), b = random_tensor(rng, {n});
       Tensor w = random_tensor(rng, {n}, false);
       ps = {a, b};
       f = [=] { return contract(mul(add(a, b), sub(a, scale(b, 0.3))), w); };
     }},
    {"add_rows",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t m = pick(rng, 1, 4), n = pick(rng, 1, 4);
       Tensor a = random_tensor(rng, {m, n}), r = random_tensor(rng, {n});
       Tensor w = random_tensor(rng, {m, n}, false);
       ps = {a, r};
       f = [=] { return contract(add_rows(a, r), w); };
     }},
    {"concat_stack",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t n = pick(rng, 1, 4);
       Tensor a = random_tensor(rng, {n}), b = random_tensor(rng, {n});
       Tensor w1 = random_tensor(rng, {2 * n}, false), w2 = random_tensor(rng, {2, n}, false);
       ps = {a, b};
       f = [=] {
         const Tensor parts[] = {a, b};
         return add(contract(concat(parts), w1), contract(stack(parts), w2));
       };
     }},
    REFLM_UNARY_CASE("tanh", tanh(a)),
    REFLM_UNARY_CASE("sigmoid", sigmoid(a)),
    REFLM_UNARY_CASE("log_sigmoid", log_sigmoid(a)),
    REFLM_UNARY_CASE("softmax", softmax(a)),
    REFLM_UNARY_CASE("log_softmax", log_softmax(a)),
    REFLM_UNARY_CASE("exp", exp(a)),
    REFLM_UNARY_CASE("log", log(exp(a))),
    {"sum_logsumexp",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       Tensor a = random_tensor(rng, {pick(rng, 1, 6)});
       ps = {a};
       f = [=] { return add(sum(mul(a, a)), logsumexp(a)); };
     }},
    {"weighted_sum",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t k = pick(rng, 1, 4), d = pick(rng, 1, 4);
       Tensor p = random_tensor(rng, {k}), rows = random_tensor(rng, {k, d});
       Tensor w = random_tensor(rng, {d}, false);
       ps = {p, rows};
       f = [=] { return contract(weighted_sum(p, rows), w); };
     }},
    {"outer_product",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       const std::size_t r = pick(rng, 1, 4), c = pick(rng, 1, 4);
       Tensor p = random_tensor(rng, {r}), q = random_tensor(rng, {c});
       Tensor w = random_tensor(rng, {r, c}, false);
       ps = {p, q};
       f = [=] { return contract(outer_product(p, q), w); };
     }},
    {"embedding_select_gather",
     [](std::mt19937_64& rng, std::vector<Tensor>& ps, std::function<Tensor()>& f) {
       Tensor table = random_tensor(rng, {5, 3});
       Tensor w = random_tensor(rng, {3}, false);
       const std::vector<std::size_t> idx = {0, 3, 3};
       const std::vector<std::size_t> rows = {4, 1};
       Tensor w2 = random_tensor(rng, {2, 3}, false);
       ps = {table};
       f = [=] {
         Tensor e = embedding_lookup(table, 2);
         return add(add(contract(e, w), select(table, 7)),
                    add(gather_sum(table, idx), contract(gather_rows(table, rows), w2)));
       };
     }},
};

INSTANTIATE_TEST_SUITE_P(All, PrimitiveGradTest, ::testing::ValuesIn(kPrimitiveCases),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(Properties, SoftmaxIsOnTheSimplexForRandomInputs) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor a = random_tensor(rng, {pick(rng, 1, 30)}, false, -50.0, 50.0);
    Tensor p = softmax(a);
    double total = 0.0;
    for (double v : p.data()) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Properties, OuterProductOfSimplexVectorsSumsToOne) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor p = softmax(random_tensor(rng, {pick(rng, 1, 8)}, false, -5, 5));
    Tensor q = softmax(random_tensor(rng, {pick(rng, 1, 8)}, false, -5, 5));
    EXPECT_NEAR(sum(outer_product(p, q)).item(), 1.0, 1e-9);
  }
}

TEST(Parameters, DuplicateNamesAreRejected) {
  ParameterSet ps;
  ps.add("a.w", Tensor::zeros({2}));
  EXPECT_THROW(ps.add("a.w", Tensor::zeros({2})), std::invalid_argument);
  EXPECT_TRUE(ps.get("a.w").requires_grad());
}

TEST(Parameters, SnapshotRestoreRoundTrips) {
  ParameterSet ps;
  Initializer init(3);
  Tensor w = ps.add("w", init.uniform({3, 2}));
  const auto snap = ps.snapshot();
  w.mutable_data()[0] = 42.0;
  ps.restore(snap);
  EXPECT_EQ(w.to_vector(), snap[0]);
}

TEST(Parameters, InitializerRespectsBoundAndSeed) {
  Initializer a(7), b(7);
  Tensor x = a.uniform({50}, 0.1), y = b.uniform({50}, 0.1);
  EXPECT_EQ(x.to_vector(), y.to_vector());
  for (double v : x.data()) EXPECT_LE(std::abs(v), 0.1);
}

TEST(Checkpoint, SaveLoadRoundTripsBitwise) {
  testing::TempDir dir("ckpt");
  ParameterSet a;
  Initializer init(11);
  a.add("m.w", init.uniform({3, 4}));
  a.add("m.b", init.uniform({4}));
  save_checkpoint(a, dir.file("a.ckpt"));

  ParameterSet b;
  Initializer other(12);
  b.add("m.w", other.uniform({3, 4}));
  b.add("m.b", other.uniform({4}));
  load_checkpoint(b, dir.file("a.ckpt"));
  EXPECT_EQ(a.snapshot(), b.snapshot());
  EXPECT_EQ(serialize_checkpoint(a), serialize_checkpoint(b));
  EXPECT_EQ(testing::read_file(dir.file("a.ckpt")).substr(0, 8), "RFLMCKPT");
}

TEST(Checkpoint, MissingOrMisshapenEntriesAreRejected) {
  testing::TempDir dir("ckpt");
  ParameterSet a;
  a.add("w", Tensor::zeros({2}));
  save_checkpoint(a, dir.file("a.ckpt"));
  ParameterSet extra;
  extra.add("w", Tensor::zeros({2}));
  extra.add("v", Tensor::zeros({2}));
  EXPECT_THROW(load_checkpoint(extra, dir.file("a.ckpt")), std::runtime_error);
  ParameterSet shaped;
  shaped.add("w", Tensor::zeros({3}));
  EXPECT_THROW(load_checkpoint(shaped, dir.file("a.ckpt")), std::runtime_error);
}

TEST(Checkpoint, LoadMatchingCopiesSharedNamesOnly) {
  testing::TempDir dir("ckpt");
  ParameterSet a;
  a.add("shared", Tensor::vector({1.0, 2.0}));
  a.add("only_a", Tensor::vector({3.0}));
  save_checkpoint(a, dir.file("a.ckpt"));
  ParameterSet b;
  Tensor shared = b.add("shared", Tensor::zeros({2}));
  Tensor fresh = b.add("fresh", Tensor::vector({9.0}));
  const auto copied = load_matching(b, dir.file("a.ckpt"));
  EXPECT_EQ(copied, (std::vector<std::string>{"shared"}));
  EXPECT_EQ(shared.to_vector(), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(fresh.to_vector(), (std::vector<double>{9.0}));
}

TEST(Checkpoint, CorruptBytesAreRejected) {
  EXPECT_THROW(parse_checkpoint("NOTACKPT"), std::runtime_error);
  ParameterSet a;
  a.add("w", Tensor::vector({1.0, 2.0}));
  std::string bytes = serialize_checkpoint(a);
  EXPECT_THROW(parse_checkpoint(bytes.substr(0, bytes.size() - 3)), std::runtime_error);
  EXPECT_THROW(parse_checkpoint(bytes + "x"), std::runtime_error);
}

}  // namespace
}  // namespace reflm
