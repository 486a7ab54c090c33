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
#ifndef BEE_TINY_CNN_HPP_
#define BEE_TINY_CNN_HPP_

#include <cstdint>
#include <memory>

#include "bee/model.hpp"
#include "bee/nn.hpp"

namespace bee {

// Small seeded convolutional classifier:
//   input (3,16,16) -> conv3x3 + tanh -> conv3x3 + tanh -> global average
//   pool -> linear head.
// Layer representations: reps[0] = input, reps[1] and reps[2] the two
// post-activation feature maps. The class head is calibrated at construction
// as a nearest-class-mean readout over the pooled features of the canonical
// class patterns, so the fixed (untrained) model separates the synthetic
// classes well above chance.
class TinyCnn final : public DifferentiableModel {
 public:
  struct Config {
    std::size_t channels = 3;
    std::size_t height = 16;
    std::size_t width = 16;
    std::size_t conv1_out = 4;
    std::size_t conv2_out = 6;
    std::size_t classes = 4;
  };

  explicit TinyCnn(std::uint64_t seed);
  TinyCnn(std::uint64_t seed, const Config& config);

  // All parameters zero; logits are identical across classes for any input.
  static TinyCnn zero_initialized();
  static TinyCnn zero_initialized(const Config& config);

  std::size_t layer_count() const override { return 2; }
  std::size_t class_count() const override { return config_.classes; }
  std::vector<std::size_t> input_shape() const override;
  std::vector<std::size_t> layer_shape(std::size_t layer) const override;

  ForwardTrace forward(const Tensor& x) const override;
  std::vector<double> forward_from(std::size_t layer, const Tensor& rep,
                                   const ForwardTrace* context = nullptr) const override;
  Tensor grad_wrt_layer(std::size_t layer, const Tensor& rep,
                        std::size_t target,
                        const ForwardTrace* context = nullptr) const override;

  const Config& config() const { return config_; }
  const Conv2d& conv1() const { return conv1_; }
  const Conv2d& conv2() const { return conv2_; }
  const Linear& head() const { return head_; }

 private:
  explicit TinyCnn(const Config& config);  // zero-initialized
  void check_layer_rep(std::size_t layer, const Tensor& rep) const;
  std::vector<double> pooled_features(const Tensor& h2) const;

  Config config_;
  Conv2d conv1_;
  Conv2d conv2_;
  Linear head_;
};

std::shared_ptr<TinyCnn> build_tiny_cnn(std::uint64_t seed,
                                        const TinyCnn::Config& config = {});

}  // namespace bee

#endif  // BEE_TINY_CNN_HPP_
