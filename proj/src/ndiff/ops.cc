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

#include "vecevent/ndiff/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vecevent/error.h"

namespace vecevent::ndiff {
namespace {

std::string ShapeOf(const Matrix &m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void RequireSameShape(const char *op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kShape, std::string(op) + ": shape mismatch " +
                                       ShapeOf(a.value()) + " vs " +
                                       ShapeOf(b.value()));
  }
}

Tape &TapeOf(Var v) {
  if (!v.valid()) throw Error(ErrorKind::kShape, "uninitialized variable");
  return *v.tape();
}

double StableSigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

Var CrossEntropy(Var probs, std::span<const double> labels,
                 std::span<const double> mask, double pos_weight,
                 double neg_weight) {
  Tape &tape = TapeOf(probs);
  const Matrix &p = probs.value();
  const auto n = static_cast<std::size_t>(p.size());
  if (p.rows() != 1 || labels.size() != n ||
      (!mask.empty() && mask.size() != n)) {
    throw Error(ErrorKind::kShape,
                "cross-entropy: probabilities " + ShapeOf(p) + " vs " +
                    std::to_string(labels.size()) + " labels");
  }
  std::vector<double> y(labels.begin(), labels.end());
  std::vector<double> m(n, 1.0);
  if (!mask.empty()) m.assign(mask.begin(), mask.end());

  double total = 0.0;
  Matrix local = Matrix::Zero(1, p.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = p(0, i);
    const double q = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
    total -= m[i] * (pos_weight * y[i] * std::log(q) +
                     neg_weight * (1.0 - y[i]) * std::log(1.0 - q));
    // The clamp has zero slope outside its interior.
    if (raw > kProbEpsilon && raw < 1.0 - kProbEpsilon) {
      local(0, i) = -m[i] * (pos_weight * y[i] / q -
                             neg_weight * (1.0 - y[i]) / (1.0 - q));
    }
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  return tape.Record(std::move(out), {probs},
                     [probs, local](Tape &t, const Matrix &g) {
                       t.GradSlot(probs) += g(0, 0) * local;
                     });
}

}  // namespace

Var Affine(Var weight, Var bias, std::initializer_list<Var> inputs) {
  Tape &tape = TapeOf(weight);
  const Matrix &w = weight.value();
  const Matrix &b = bias.value();
  if (inputs.size() == 0) throw Error(ErrorKind::kShape, "affine: no input");
  Eigen::Index total_rows = 0;
  const Eigen::Index batch = inputs.begin()->cols();
  for (const Var &x : inputs) {
    if (x.cols() != batch) {
      throw Error(ErrorKind::kShape, "affine: inputs differ in column count");
    }
    total_rows += x.rows();
  }
  if (w.cols() != total_rows || b.rows() != w.rows() || b.cols() != 1) {
    throw Error(ErrorKind::kShape, "affine: weight " + ShapeOf(w) + ", bias " +
                                       ShapeOf(b) + ", input rows " +
                                       std::to_string(total_rows));
  }
  Matrix y = b.replicate(1, batch);
  Eigen::Index offset = 0;
  for (const Var &x : inputs) {
    y.noalias() += w.middleCols(offset, x.rows()) * x.value();
    offset += x.rows();
  }
  std::vector<Var> parts(inputs);
  std::vector<Var> all{weight, bias};
  all.insert(all.end(), parts.begin(), parts.end());
  return tape.Record(
      std::move(y), all, [weight, bias, parts](Tape &t, const Matrix &g) {
        const Matrix &w = weight.value();
        if (t.NeedsGrad(bias)) t.GradSlot(bias) += g.rowwise().sum();
        Eigen::Index offset = 0;
        for (const Var &x : parts) {
          const Eigen::Index n = x.rows();
          if (t.NeedsGrad(weight)) {
            t.GradSlot(weight).middleCols(offset, n).noalias() +=
                g * x.value().transpose();
          }
          if (t.NeedsGrad(x)) {
            t.GradSlot(x).noalias() += w.middleCols(offset, n).transpose() * g;
          }
          offset += n;
        }
      });
}

Var Tanh(Var x) {
  Matrix y = x.value().array().tanh().matrix();
  Matrix y_copy = y;
  return TapeOf(x).Record(std::move(y), {x},
                          [x, y = std::move(y_copy)](Tape &t, const Matrix &g) {
                            t.GradSlot(x).array() +=
                                g.array() * (1.0 - y.array().square());
                          });
}

Var Sigmoid(Var x) {
  Matrix y = x.value().unaryExpr([](double v) { return StableSigmoid(v); });
  Matrix y_copy = y;
  return TapeOf(x).Record(std::move(y), {x},
                          [x, y = std::move(y_copy)](Tape &t, const Matrix &g) {
                            t.GradSlot(x).array() +=
                                g.array() * y.array() * (1.0 - y.array());
                          });
}

Var Relu(Var x) {
  Matrix y = x.value().cwiseMax(0.0);
  return TapeOf(x).Record(std::move(y), {x}, [x](Tape &t, const Matrix &g) {
    t.GradSlot(x).array() +=
        (x.value().array() > 0.0).select(g.array(), 0.0);
  });
}

Var Abs(Var x) {
  Matrix y = x.value().cwiseAbs();
  return TapeOf(x).Record(std::move(y), {x}, [x](Tape &t, const Matrix &g) {
    // Eigen's sign() is 0 at 0, which is the chosen subgradient.
    t.GradSlot(x).array() += g.array() * x.value().array().sign();
  });
}

Var Add(Var a, Var b) {
  RequireSameShape("add", a, b);
  Matrix y = a.value() + b.value();
  return TapeOf(a).Record(std::move(y), {a, b}, [a, b](Tape &t, const Matrix &g) {
    if (t.NeedsGrad(a)) t.GradSlot(a) += g;
    if (t.NeedsGrad(b)) t.GradSlot(b) += g;
  });
}

Var Sub(Var a, Var b) {
  RequireSameShape("sub", a, b);
  Matrix y = a.value() - b.value();
  return TapeOf(a).Record(std::move(y), {a, b}, [a, b](Tape &t, const Matrix &g) {
    if (t.NeedsGrad(a)) t.GradSlot(a) += g;
    if (t.NeedsGrad(b)) t.GradSlot(b) -= g;
  });
}

Var Mul(Var a, Var b) {
  RequireSameShape("mul", a, b);
  Matrix y = a.value().cwiseProduct(b.value());
  return TapeOf(a).Record(std::move(y), {a, b}, [a, b](Tape &t, const Matrix &g) {
    if (t.NeedsGrad(a)) t.GradSlot(a) += g.cwiseProduct(b.value());
    if (t.NeedsGrad(b)) t.GradSlot(b) += g.cwiseProduct(a.value());
  });
}

Var Scale(Var x, double factor) {
  Matrix y = factor * x.value();
  return TapeOf(x).Record(std::move(y), {x},
                          [x, factor](Tape &t, const Matrix &g) {
                            t.GradSlot(x) += factor * g;
                          });
}

Var Concat(const std::vector<Var> &parts) {
  if (parts.empty()) throw Error(ErrorKind::kShape, "concat: no parts");
  Tape &tape = TapeOf(parts.front());
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const Var &p : parts) {
    if (p.cols() != cols) {
      throw Error(ErrorKind::kShape, "concat: parts differ in column count");
    }
    rows += p.rows();
  }
  Matrix y(rows, cols);
  Eigen::Index offset = 0;
  for (const Var &p : parts) {
    y.middleRows(offset, p.rows()) = p.value();
    offset += p.rows();
  }
  return tape.Record(std::move(y), parts, [parts](Tape &t, const Matrix &g) {
    Eigen::Index offset = 0;
    for (const Var &p : parts) {
      if (t.NeedsGrad(p)) t.GradSlot(p) += g.middleRows(offset, p.rows());
      offset += p.rows();
    }
  });
}

Var SliceRows(Var x, Eigen::Index begin, Eigen::Index count) {
  if (begin < 0 || count < 0 || begin + count > x.rows()) {
    throw Error(ErrorKind::kShape, "slice: rows [" + std::to_string(begin) +
                                       ", " + std::to_string(begin + count) +
                                       ") out of " + std::to_string(x.rows()));
  }
  Matrix y = x.value().middleRows(begin, count);
  return TapeOf(x).Record(std::move(y), {x},
                          [x, begin, count](Tape &t, const Matrix &g) {
                            t.GradSlot(x).middleRows(begin, count) += g;
                          });
}

Var Sum(Var x) {
  Matrix y(1, 1);
  y(0, 0) = x.value().sum();
  return TapeOf(x).Record(std::move(y), {x}, [x](Tape &t, const Matrix &g) {
    t.GradSlot(x).array() += g(0, 0);
  });
}

Var Dropout(Var x, double rate, bool training, Rng &rng) {
  if (rate < 0.0 || rate >= 1.0) {
    throw Error(ErrorKind::kShape,
                "dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  Matrix mask(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      mask(i, j) = rng.Uniform() < rate ? 0.0 : keep_scale;
    }
  }
  Matrix y = x.value().cwiseProduct(mask);
  return TapeOf(x).Record(std::move(y), {x},
                          [x, mask = std::move(mask)](Tape &t, const Matrix &g) {
                            t.GradSlot(x) += g.cwiseProduct(mask);
                          });
}

Var WeightedBce(Var probs, std::span<const double> labels, double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw Error(ErrorKind::kTrainingSetup,
                "positive-class weight must lie in [0, 1], got " +
                    std::to_string(z));
  }
  return CrossEntropy(probs, labels, {}, z, 1.0 - z);
}

Var Bce(Var probs, std::span<const double> labels,
        std::span<const double> mask) {
  return CrossEntropy(probs, labels, mask, 1.0, 1.0);
}

}  // namespace vecevent::ndiff
