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

#include "vecevent/gradcheck_suite.h"

#include <cmath>
#include <functional>

#include "vecevent/ndiff/gradcheck.h"
#include "vecevent/ndiff/layers.h"
#include "vecevent/ndiff/ops.h"
#include "vecevent/random.h"
#include "vecevent/vecent.h"
#include "vecevent/vecom.h"

namespace vecevent {
namespace {

using ndiff::Matrix;
using ndiff::NamedTensor;
using ndiff::Tape;
using ndiff::Tensor;
using ndiff::Var;

// Entries bounded away from zero so kinks of relu/abs stay out of reach.
Tensor RandomTensor(std::size_t rows, std::size_t cols, Rng &rng,
                    double lo = -1.0, double hi = 1.0) {
  Tensor t(rows, cols, true);
  for (double &v : t.data()) {
    double x = rng.Uniform(lo, hi);
    if (lo < 0.0 && std::abs(x) < 0.1) x = x < 0 ? x - 0.1 : x + 0.1;
    v = x;
  }
  return t;
}

// Weighted sum with fixed random coefficients so every output entry
// contributes a distinct gradient.
Var Project(Var x, const Matrix &coef) {
  Tape &tape = *x.tape();
  return ndiff::Sum(ndiff::Mul(x, tape.Constant(coef)));
}

Matrix Coefficients(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return m;
}

vecent::ContextWindow RandomWindow(int dim, int window, Rng &rng) {
  vecent::ContextWindow w;
  w.left.assign(static_cast<std::size_t>(window + 1), std::nullopt);
  w.right = w.left;
  w.left_vectors = Coefficients(dim, window + 1, rng);
  w.right_vectors = Coefficients(dim, window + 1, rng);
  return w;
}

class Suite {
 public:
  Suite(double tolerance, double epsilon)
      : tolerance_(tolerance), epsilon_(epsilon) {}

  void Run(const std::string &name, const std::function<Var(Tape &)> &loss,
           std::vector<NamedTensor> params) {
    auto r = ndiff::CheckGradients(loss, params, epsilon_);
    cases_.push_back({name, r.max_relative_error, r.worst_parameter,
                      r.entries_checked, r.max_relative_error <= tolerance_});
  }

  std::vector<GradcheckCase> Take() { return std::move(cases_); }

 private:
  double tolerance_;
  double epsilon_;
  std::vector<GradcheckCase> cases_;
};

}  // namespace

std::vector<GradcheckCase> RunGradcheckSuite(std::uint64_t seed,
                                             double tolerance,
                                             double epsilon) {
  Suite suite(tolerance, epsilon);
  Rng rng(seed);

  // Elementwise and structural operators.
  {
    Tensor a = RandomTensor(3, 4, rng), b = RandomTensor(3, 4, rng);
    const Matrix c = Coefficients(3, 4, rng);
    using Unary = Var (*)(Var);
    const std::pair<const char *, Unary> unary[] = {
        {"tanh", ndiff::Tanh},
        {"sigmoid", ndiff::Sigmoid},
        {"relu", ndiff::Relu},
        {"abs", ndiff::Abs}};
    for (const auto &[name, fn] : unary) {
      suite.Run(name, [&, fn = fn](Tape &t) { return Project(fn(t.Leaf(a)), c); },
                {{"a", &a}});
    }
    suite.Run("add", [&](Tape &t) {
      return Project(ndiff::Add(t.Leaf(a), t.Leaf(b)), c);
    }, {{"a", &a}, {"b", &b}});
    suite.Run("sub", [&](Tape &t) {
      return Project(ndiff::Sub(t.Leaf(a), t.Leaf(b)), c);
    }, {{"a", &a}, {"b", &b}});
    suite.Run("mul", [&](Tape &t) {
      return Project(ndiff::Mul(t.Leaf(a), t.Leaf(b)), c);
    }, {{"a", &a}, {"b", &b}});
    suite.Run("scale", [&](Tape &t) {
      return Project(ndiff::Scale(t.Leaf(a), -1.7), c);
    }, {{"a", &a}});
    suite.Run("dropout", [&](Tape &t) {
      Rng mask_rng(seed ^ 0x5eedULL);
      return Project(ndiff::Dropout(t.Leaf(a), 0.3, true, mask_rng), c);
    }, {{"a", &a}});

    Tensor top = RandomTensor(2, 4, rng);
    const Matrix c5 = Coefficients(5, 4, rng);
    suite.Run("concat", [&](Tape &t) {
      return Project(ndiff::Concat({t.Leaf(top), t.Leaf(b)}), c5);
    }, {{"top", &top}, {"b", &b}});
    const Matrix c2 = Coefficients(2, 4, rng);
    suite.Run("slice_rows", [&](Tape &t) {
      return Project(ndiff::SliceRows(t.Leaf(a), 1, 2), c2);
    }, {{"a", &a}});
    suite.Run("sum", [&](Tape &t) {
      return ndiff::Sum(ndiff::Mul(t.Leaf(a), t.Leaf(a)));
    }, {{"a", &a}});
  }

  // Affine over two implicitly concatenated inputs.
  {
    Tensor w = RandomTensor(3, 5, rng), bias = RandomTensor(3, 1, rng);
    Tensor x1 = RandomTensor(2, 4, rng), x2 = RandomTensor(3, 4, rng);
    const Matrix c = Coefficients(3, 4, rng);
    suite.Run("affine", [&](Tape &t) {
      return Project(ndiff::Affine(t.Leaf(w), t.Leaf(bias),
                                   {t.Leaf(x1), t.Leaf(x2)}), c);
    }, {{"w", &w}, {"b", &bias}, {"x1", &x1}, {"x2", &x2}});
  }

  // Cross-entropy losses on probabilities away from the clamp.
  {
    Tensor p = RandomTensor(1, 6, rng, 0.05, 0.95);
    const std::vector<double> y{1, 0, 0, 1, 0, 1};
    const std::vector<double> mask{1, 0, 1, 1, 0, 1};
    suite.Run("weighted_bce", [&](Tape &t) {
      return ndiff::WeightedBce(t.Leaf(p), y, 0.7);
    }, {{"p", &p}});
    suite.Run("bce_masked", [&](Tape &t) {
      return ndiff::Bce(t.Leaf(p), y, mask);
    }, {{"p", &p}});
  }

  // LSTM step and unrolled sequence.
  {
    ndiff::LstmCellParams cell(3, 4);
    cell.Initialize(rng);
    for (double &v : cell.bias.data()) v += rng.Uniform(-0.5, 0.5);
    Tensor x = RandomTensor(3, 2, rng), h = RandomTensor(4, 2, rng),
           c = RandomTensor(4, 2, rng);
    const Matrix ch = Coefficients(4, 2, rng), cc = Coefficients(4, 2, rng);
    std::vector<NamedTensor> params;
    cell.AppendParameters("cell", params);
    params.push_back({"x", &x});
    params.push_back({"h", &h});
    params.push_back({"c", &c});
    suite.Run("lstm_step", [&](Tape &t) {
      auto s = ndiff::LstmStep(ndiff::Bind(t, cell), t.Leaf(x), t.Leaf(h),
                               t.Leaf(c));
      return ndiff::Add(Project(s.h, ch), Project(s.c, cc));
    }, params);

    std::vector<Tensor> seq;
    for (int k = 0; k < 4; ++k) seq.push_back(RandomTensor(3, 2, rng));
    std::vector<NamedTensor> seq_params;
    cell.AppendParameters("cell", seq_params);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      seq_params.push_back({"x" + std::to_string(k), &seq[k]});
    }
    suite.Run("lstm_last", [&](Tape &t) {
      std::vector<Var> xs;
      for (Tensor &s : seq) xs.push_back(t.Leaf(s));
      return Project(ndiff::LstmLast(ndiff::Bind(t, cell), xs), ch);
    }, seq_params);
  }

  // Full argument loss: BLSTM, dense layers, dropout and weighted BCE.
  const int dim = 5, window = 3, lstm_hidden = 6, mlp_hidden = 8;
  std::vector<vecent::ContextWindow> windows;
  for (int k = 0; k < 4; ++k) windows.push_back(RandomWindow(dim, window, rng));
  std::vector<const vecent::ContextWindow *> batch;
  for (const auto &w : windows) batch.push_back(&w);
  {
    vecent::ArgumentModel model("Agent", dim, lstm_hidden, mlp_hidden, 0.2);
    model.Initialize(rng);
    const std::vector<double> y{1, 0, 1, 0};
    suite.Run("argument_model", [&](Tape &t) {
      Rng mask_rng(seed ^ 0xa46ULL);
      Var p = model.Forward(t, batch, true, mask_rng);
      return ndiff::Scale(ndiff::WeightedBce(p, y, 0.6), 0.25);
    }, model.Parameters());
  }

  // Event heads alone, and composed end to end through two argument models.
  {
    vecom::EventModel event("Activation", "Agent", "Target", 2 * mlp_hidden,
                            7);
    event.Initialize(rng);
    for (auto &p : event.Parameters()) {
      if (p.name.ends_with("bias")) {
        for (double &v : p.tensor->data()) v = rng.Uniform(-0.3, 0.3);
      }
    }
    Tensor v = RandomTensor(2 * mlp_hidden, 4, rng);
    const std::vector<vecom::PairLabel> labels{{1, 1}, {0, 0}, {1, 0}, {0, 0}};
    std::vector<NamedTensor> params = event.Parameters();
    params.push_back({"composed", &v});
    suite.Run("event_model", [&](Tape &t) {
      return vecom::EventLoss(event.Forward(t, t.Leaf(v)), labels);
    }, params);

    vecent::ArgumentModel source("Agent", dim, lstm_hidden, mlp_hidden, 0.2);
    vecent::ArgumentModel target("Target", dim, lstm_hidden, mlp_hidden, 0.2);
    source.Initialize(rng);
    target.Initialize(rng);
    std::vector<const vecent::ContextWindow *> first{batch[0], batch[1],
                                                     batch[2], batch[3]};
    std::vector<const vecent::ContextWindow *> second{batch[1], batch[0],
                                                      batch[3], batch[2]};
    std::vector<NamedTensor> all = event.Parameters();
    for (auto &p : source.Parameters()) all.push_back({"source." + p.name, p.tensor});
    for (auto &p : target.Parameters()) all.push_back({"target." + p.name, p.tensor});
    suite.Run("vecom_end_to_end", [&](Tape &t) {
      Var a = ndiff::Concat(
          {source.Embedding(t, first), target.Embedding(t, first)});
      Var b = ndiff::Concat(
          {target.Embedding(t, second), source.Embedding(t, second)});
      return vecom::EventLoss(event.Forward(t, vecom::Compose(a, b)), labels);
    }, all);
  }
  return suite.Take();
}

}  // namespace vecevent
