/*
 * Copyright 2026 The BEE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef BEE_TESTS_SUPPORT_HPP_
#define BEE_TESTS_SUPPORT_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bee/model.hpp"
#include "bee/rng.hpp"
#include "bee/tensor.hpp"

namespace bee::test {

// Linear two-class model over a 1x2x2 input: logits = W * flatten(x) + b.
// The ground-truth influence of pixel i on the class-y score is
// (W[y][i] - W[1-y][i]) * x[i].
class LinearToyModel final : public DifferentiableModel {
 public:
  LinearToyModel(Tensor weight, std::vector<double> bias)
      : weight_(std::move(weight)), bias_(std::move(bias)) {}

  static LinearToyModel default_model() {
    // Class-0 influence ordering: pixel 0 > 1 > 2 > 3 on the all-ones input.
    Tensor w({2, 4});
    const double row0[4] = {2.0, 1.5, 1.0, 0.5};
    for (std::size_t i = 0; i < 4; ++i) {
      w(0, i) = row0[i];
      w(1, i) = -row0[i];
    }
    return LinearToyModel(std::move(w), {0.0, 0.0});
  }

  std::size_t layer_count() const override { return 0; }
  std::size_t class_count() const override { return weight_.dim(0); }
  std::vector<std::size_t> input_shape() const override { return {1, 2, 2}; }
  std::vector<std::size_t> layer_shape(std::size_t layer) const override {
    if (layer != 0) throw std::invalid_argument("LinearToyModel: layer 0 only");
    return input_shape();
  }

  ForwardTrace forward(const Tensor& x) const override {
    ForwardTrace trace;
    trace.reps.push_back(x);
    trace.logits.assign(weight_.dim(0), 0.0);
    for (std::size_t c = 0; c < weight_.dim(0); ++c) {
      trace.logits[c] = bias_[c];
      for (std::size_t i = 0; i < weight_.dim(1); ++i)
        trace.logits[c] += weight_(c, i) * x[i];
    }
    return trace;
  }

  std::vector<double> forward_from(std::size_t layer, const Tensor& rep,
                                   const ForwardTrace*) const override {
    if (layer != 0) throw std::invalid_argument("LinearToyModel: layer 0 only");
    return forward(rep).logits;
  }

  Tensor grad_wrt_layer(std::size_t layer, const Tensor& rep,
                        std::size_t target,
                        const ForwardTrace*) const override {
    if (layer != 0) throw std::invalid_argument("LinearToyModel: layer 0 only");
    Tensor grad(rep.shape());
    for (std::size_t i = 0; i < grad.size(); ++i)
      grad[i] = weight_(target, i);
    return grad;
  }

  const Tensor& weight() const { return weight_; }

 private:
  Tensor weight_;
  std::vector<double> bias_;
};

// Wraps an arbitrary logits function; gradients are not supported.
class FunctionModel final : public DifferentiableModel {
 public:
  using LogitsFn = std::function<std::vector<double>(const Tensor&)>;

  FunctionModel(std::vector<std::size_t> input_shape, std::size_t classes,
                LogitsFn fn)
      : input_shape_(std::move(input_shape)), classes_(classes),
        fn_(std::move(fn)) {}

  std::size_t layer_count() const override { return 0; }
  std::size_t class_count() const override { return classes_; }
  std::vector<std::size_t> input_shape() const override { return input_shape_; }
  std::vector<std::size_t> layer_shape(std::size_t) const override {
    return input_shape_;
  }

  ForwardTrace forward(const Tensor& x) const override {
    ForwardTrace trace;
    trace.reps.push_back(x);
    trace.logits = fn_(x);
    return trace;
  }

  std::vector<double> forward_from(std::size_t, const Tensor& rep,
                                   const ForwardTrace*) const override {
    return fn_(rep);
  }

  Tensor grad_wrt_layer(std::size_t, const Tensor&, std::size_t,
                        const ForwardTrace*) const override {
    throw std::logic_error("FunctionModel has no gradients");
  }

 private:
  std::vector<std::size_t> input_shape_;
  std::size_t classes_;
  LogitsFn fn_;
};

inline Tensor random_tensor(const std::vector<std::size_t>& shape, Rng& rng,
                            double lo = 0.0, double hi = 1.0) {
  Tensor t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

inline double max_rel_error(const Tensor& got, const Tensor& want,
                            double denom_floor = 1e-8) {
  if (!got.same_shape(want)) return 1e18;
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double denom = std::max(std::abs(want[i]), denom_floor);
    worst = std::max(worst, std::abs(got[i] - want[i]) / denom);
  }
  return worst;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace bee::test

#endif  // BEE_TESTS_SUPPORT_HPP_
