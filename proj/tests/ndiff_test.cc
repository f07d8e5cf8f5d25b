// Copyright 2026 The vecevent Authors.
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
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "vecevent/error.h"
#include "vecevent/gradcheck_suite.h"
#include "vecevent/ndiff/checkpoint.h"
#include "vecevent/ndiff/gradcheck.h"
#include "vecevent/ndiff/layers.h"
#include "vecevent/ndiff/ops.h"
#include "vecevent/ndiff/sgd.h"

namespace vecevent::ndiff {
namespace {

Matrix Mat(int rows, int cols, std::initializer_list<double> values) {
  Matrix m(rows, cols);
  auto it = values.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

TEST(TapeTest, BackwardAccumulatesIntoLeaves) {
  Tensor a(2, 1, true);
  a.value() << 1.5, -2.0;
  Tape tape;
  Var x = tape.Leaf(a);
  Var loss = Sum(Mul(x, x));
  tape.Backward(loss);
  EXPECT_DOUBLE_EQ(a.grad()(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(a.grad()(1, 0), -4.0);
  EXPECT_EQ(tape.size(), 0u);
}

TEST(TapeTest, BackwardRequiresScalarLoss) {
  Tensor a(2, 1, true);
  Tape tape;
  Var x = tape.Leaf(a);
  EXPECT_THROW(tape.Backward(x), Error);
}

TEST(TapeTest, InferenceTapeLeavesNoGradient) {
  Tensor a(2, 1, true);
  a.value() << 1.0, 2.0;
  Tape tape(Tape::Mode::kInference);
  Var x = tape.Leaf(a);
  EXPECT_FALSE(tape.NeedsGrad(x));
  EXPECT_DOUBLE_EQ(Sum(x).value()(0, 0), 3.0);
}

TEST(TapeTest, ConstLeafIsConstant) {
  Tensor a(2, 1, true);
  const Tensor &ca = a;
  Tape tape;
  EXPECT_FALSE(tape.NeedsGrad(tape.Leaf(ca)));
  EXPECT_TRUE(tape.NeedsGrad(tape.Leaf(a)));
}

TEST(OpsTest, ForwardValuesMatchElementwiseFormulas) {
  Tape tape(Tape::Mode::kInference);
  Var x = tape.Constant(Mat(1, 4, {-2.0, -0.5, 0.0, 3.0}));
  const Matrix &xv = x.value();
  Matrix t = Tanh(x).value(), s = Sigmoid(x).value(), r = Relu(x).value(),
         a = Abs(x).value();
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(t(0, j), std::tanh(xv(0, j)), 1e-15);
    EXPECT_NEAR(s(0, j), 1.0 / (1.0 + std::exp(-xv(0, j))), 1e-15);
    EXPECT_EQ(r(0, j), xv(0, j) > 0 ? xv(0, j) : 0.0);
    EXPECT_EQ(a(0, j), std::fabs(xv(0, j)));
  }
}

TEST(OpsTest, SigmoidIsStableAtExtremes) {
  Tape tape(Tape::Mode::kInference);
  Matrix s = Sigmoid(tape.Constant(Mat(1, 2, {-1000.0, 1000.0}))).value();
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_EQ(s(0, 1), 1.0);
  EXPECT_TRUE(s.allFinite());
}

TEST(OpsTest, AffineConcatenatesInputsImplicitly) {
  Tape tape(Tape::Mode::kInference);
  Var w = tape.Constant(Mat(2, 3, {1, 2, 3, 4, 5, 6}));
  Var b = tape.Constant(Mat(2, 1, {0.5, -0.5}));
  Var x1 = tape.Constant(Mat(1, 2, {1, 2}));
  Var x2 = tape.Constant(Mat(2, 2, {3, 4, 5, 6}));
  Matrix y = Affine(w, b, {x1, x2}).value();
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  Matrix expect = w.value() * x;
  expect.colwise() += b.value().col(0);
  EXPECT_TRUE(y.isApprox(expect, 1e-15));
}

TEST(OpsTest, ShapeMismatchThrows) {
  Tape tape;
  Var a = tape.Constant(Matrix::Zero(2, 2));
  Var b = tape.Constant(Matrix::Zero(3, 2));
  EXPECT_THROW(Add(a, b), Error);
  EXPECT_THROW(SliceRows(a, 1, 2), Error);
}

TEST(OpsTest, DropoutIdentityWhenOffAndRejectsBadRate) {
  Rng rng(1);
  Tape tape;
  Var x = tape.Constant(Mat(1, 3, {1, 2, 3}));
  EXPECT_EQ(Dropout(x, 0.5, false, rng).value(), x.value());
  EXPECT_EQ(Dropout(x, 0.0, true, rng).value(), x.value());
  EXPECT_THROW(Dropout(x, 1.0, true, rng), Error);
  EXPECT_THROW(Dropout(x, -0.1, true, rng), Error);
}

TEST(OpsTest, DropoutKeepsExpectation) {
  Rng rng(9);
  Tape tape;
  Var x = tape.Constant(Matrix::Ones(1, 20000));
  const double mean = Dropout(x, 0.2, true, rng).value().mean();
  EXPECT_NEAR(mean, 1.0, 0.03);
}

TEST(OpsTest, WeightedBceMatchesHandComputation) {
  Tape tape;
  Var p = tape.Constant(Mat(1, 3, {0.9, 0.2, 0.6}));
  const std::vector<double> y{1, 0, 0};
  const double z = 0.8;
  const double expect = -(z * std::log(0.9) + (1 - z) * std::log(0.8) +
                          (1 - z) * std::log(0.4));
  EXPECT_NEAR(WeightedBce(p, y, z).value()(0, 0), expect, 1e-12);
}

TEST(OpsTest, WeightedBceRejectsWeightOutsideUnitInterval) {
  Tape tape;
  Var p = tape.Constant(Mat(1, 1, {0.5}));
  const std::vector<double> y{1};
  EXPECT_THROW(WeightedBce(p, y, 1.5), Error);
}

TEST(OpsTest, ClampedProbabilitiesGiveFiniteLossAndZeroGradient) {
  Tensor p(1, 2, true);
  p.value() << 0.0, 1.0;
  Tape tape;
  const std::vector<double> y{1, 1};
  Var loss = Bce(tape.Leaf(p), y);
  EXPECT_NEAR(loss.value()(0, 0), -std::log(kProbEpsilon) - std::log(1 - kProbEpsilon), 1e-9);
  tape.Backward(loss);
  EXPECT_EQ(p.grad()(0, 0), 0.0);
  EXPECT_EQ(p.grad()(0, 1), 0.0);
}

TEST(OpsTest, MaskedBceIgnoresMaskedTerms) {
  Tape tape;
  Var p = tape.Constant(Mat(1, 2, {0.3, 0.001}));
  const std::vector<double> y{1, 1}, mask{1, 0};
  EXPECT_NEAR(Bce(p, y, mask).value()(0, 0), -std::log(0.3), 1e-12);
}

TEST(LayersTest, LstmInitSetsForgetBias) {
  Rng rng(3);
  LstmCellParams cell(4, 3);
  cell.Initialize(rng);
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(cell.bias.value()(i, 0), (i >= 3 && i < 6) ? 1.0 : 0.0);
  }
  const double limit = std::sqrt(6.0 / (7 + 3));
  EXPECT_LE(cell.weight.value().cwiseAbs().maxCoeff(), limit);
}

TEST(LayersTest, LstmStepMatchesScalarOracle) {
  // One unit, one input: gates computed by hand.
  LstmCellParams cell(1, 1);
  cell.weight.value() << 0.5, -0.3, 0.2, 0.1, -0.4, 0.6, 0.7, 0.8;
  cell.bias.value() << 0.1, 1.0, -0.2, 0.05;
  Tape tape(Tape::Mode::kInference);
  const double x = 0.9, h = -0.4, c = 0.3;
  auto s = LstmStep(Bind(tape, cell), tape.Constant(Mat(1, 1, {x})),
                    tape.Constant(Mat(1, 1, {h})), tape.Constant(Mat(1, 1, {c})));
  auto sig = [](double v) { return 1 / (1 + std::exp(-v)); };
  const auto &W = cell.weight.value();
  const auto &b = cell.bias.value();
  const double i = sig(W(0, 0) * x + W(0, 1) * h + b(0, 0));
  const double f = sig(W(1, 0) * x + W(1, 1) * h + b(1, 0));
  const double o = sig(W(2, 0) * x + W(2, 1) * h + b(2, 0));
  const double g = std::tanh(W(3, 0) * x + W(3, 1) * h + b(3, 0));
  const double c2 = f * c + i * g;
  EXPECT_NEAR(s.c.value()(0, 0), c2, 1e-15);
  EXPECT_NEAR(s.h.value()(0, 0), o * std::tanh(c2), 1e-15);
}

TEST(LayersTest, LstmLastRejectsEmptySequence) {
  LstmCellParams cell(2, 2);
  Tape tape;
  EXPECT_THROW(LstmLast(Bind(tape, cell), {}), Error);
}

TEST(SgdTest, MomentumUpdateMatchesRecurrence) {
  Tensor w(1, true);
  w.value()(0, 0) = 1.0;
  std::vector<NamedTensor> params{{"w", &w}};
  Sgd sgd(0.1, 0.9);
  double p = 1.0, v = 0.0;
  for (int step = 0; step < 5; ++step) {
    const double g = 2.0 * p;  // d/dp p^2
    w.grad()(0, 0) = g;
    sgd.Step(params);
    v = 0.9 * v - 0.1 * g;
    p += v;
    EXPECT_NEAR(w.value()(0, 0), p, 1e-15);
  }
}

TEST(SgdTest, NonFiniteGradientThrowsBeforeAnyUpdate) {
  Tensor a(1, true), b(1, true);
  a.value()(0, 0) = 1.0;
  b.value()(0, 0) = 2.0;
  a.grad()(0, 0) = 1.0;
  b.grad()(0, 0) = std::nan("");
  std::vector<NamedTensor> params{{"a", &a}, {"b", &b}};
  Sgd sgd(0.1, 0.0);
  try {
    sgd.Step(params);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTraining);
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
  EXPECT_EQ(a.value()(0, 0), 1.0);
}

TEST(SgdTest, RejectsBadHyperparameters) {
  EXPECT_THROW(Sgd(0.0, 0.9), Error);
  EXPECT_THROW(Sgd(0.1, 1.0), Error);
}

TEST(CheckpointTest, RoundTripIsExact) {
  Tensor a(std::size_t{2}, std::size_t{3}), b(4);
  Rng rng(5);
  for (double &v : a.data()) v = rng.Normal();
  for (double &v : b.data()) v = rng.Normal();
  std::vector<NamedTensor> params{{"a", &a}, {"b", &b}};
  std::stringstream buf;
  WriteCheckpoint(buf, params);
  Tensor a2(std::size_t{2}, std::size_t{3}), b2(4);
  std::vector<NamedTensor> target{{"b", &b2}, {"a", &a2}};
  LoadCheckpointInto(buf, target);
  EXPECT_EQ(a.value(), a2.value());
  EXPECT_EQ(b.value(), b2.value());
}

TEST(CheckpointTest, RejectsBadMagicAndShapeMismatch) {
  std::stringstream bad("NOTACKPT........");
  EXPECT_THROW(ReadCheckpoint(bad), Error);

  Tensor a(std::size_t{2}, std::size_t{3});
  std::vector<NamedTensor> params{{"a", &a}};
  std::stringstream buf;
  WriteCheckpoint(buf, params);
  Tensor wrong(std::size_t{3}, std::size_t{2});
  std::vector<NamedTensor> target{{"a", &wrong}};
  EXPECT_THROW(LoadCheckpointInto(buf, target), Error);
}

TEST(CheckpointTest, TruncatedFileThrows) {
  Tensor a(std::size_t{2}, std::size_t{3});
  std::vector<NamedTensor> params{{"a", &a}};
  std::stringstream buf;
  WriteCheckpoint(buf, params);
  std::string bytes = buf.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(ReadCheckpoint(cut), Error);
}

TEST(GradcheckTest, DetectsAWrongGradient) {
  Tensor a(3, true);
  a.value() << 0.5, -1.0, 2.0;
  std::vector<NamedTensor> params{{"a", &a}};
  // Records a value of sum(a^2) with a deliberately halved gradient.
  auto loss = [&](Tape &t) {
    Var x = t.Leaf(a);
    Matrix v(1, 1);
    v(0, 0) = a.value().squaredNorm();
    return t.Record(std::move(v), {x}, [x](Tape &tp, const Matrix &g) {
      tp.GradSlot(x) += g(0, 0) * tp.value(x);
    });
  };
  EXPECT_GT(CheckGradients(loss, params).max_relative_error, 0.1);
}

TEST(GradcheckTest, RelativeErrorUsesFloor) {
  EXPECT_DOUBLE_EQ(RelativeError(0.0, 1e-9), 1e-9 / 1e-6);
  EXPECT_DOUBLE_EQ(RelativeError(2.0, 1.0), 0.5);
}

TEST(GradcheckTest, SuiteCoversEveryOperatorAndPasses) {
  const auto cases = RunGradcheckSuite(42);
  std::set<std::string> names;
  for (const auto &c : cases) {
    names.insert(c.name);
    EXPECT_TRUE(c.passed) << c.name << " " << c.max_relative_error;
    EXPECT_GT(c.entries, 0u);
  }
  for (const char *op : {"affine", "tanh", "sigmoid", "relu", "abs", "add",
                         "sub", "mul", "scale", "concat", "slice_rows", "sum",
                         "dropout", "weighted_bce", "bce_masked", "lstm_step",
                         "lstm_last", "argument_model", "event_model",
                         "vecom_end_to_end"}) {
    EXPECT_TRUE(names.contains(op)) << op;
  }
}

}  // namespace
}  // namespace vecevent::ndiff
