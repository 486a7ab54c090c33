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
#ifndef BEE_TINY_ATTENTION_HPP_
#define BEE_TINY_ATTENTION_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "bee/model.hpp"
#include "bee/nn.hpp"

namespace bee {

// Small seeded transformer encoder classifier over a patch grid:
//   input (3,12,12) -> 3x3 grid of 4x4 patches, linearly embedded ->
//   [CLS] token prepended, positional embeddings added ->
//   `blocks` encoder blocks (multi-head softmax attention + residual,
//   tanh MLP + residual, no layer norm) -> linear head on the [CLS] token.
//
// Layer representations overload the convention: reps[l] for l >= 1 is the
// block-l attention tensor (heads x tokens x tokens). forward_from and
// grad_wrt_layer on those layers treat the network as a function of the
// block-l attention with everything upstream frozen at the traced input,
// which is why they require the ForwardTrace of that input.
class TinyAttention final : public AttentionModel {
 public:
  struct Config {
    std::size_t channels = 3;
    std::size_t height = 12;
    std::size_t width = 12;
    std::size_t patch = 4;
    std::size_t embed_dim = 8;
    std::size_t heads = 2;
    std::size_t blocks = 2;
    std::size_t mlp_dim = 16;
    std::size_t classes = 4;
  };

  struct BlockParams {
    Tensor wq, wk, wv;  // (embed, embed), heads sliced along columns
    Tensor wo;          // (embed, embed)
    std::vector<double> bo;
    Tensor w1;          // (embed, mlp)
    std::vector<double> b1;
    Tensor w2;          // (mlp, embed)
    std::vector<double> b2;
  };

  explicit TinyAttention(std::uint64_t seed);
  TinyAttention(std::uint64_t seed, const Config& config);

  std::size_t layer_count() const override { return config_.blocks; }
  std::size_t class_count() const override { return config_.classes; }
  std::vector<std::size_t> input_shape() const override;
  std::vector<std::size_t> layer_shape(std::size_t layer) const override;

  ForwardTrace forward(const Tensor& x) const override;
  std::vector<double> forward_from(std::size_t layer, const Tensor& rep,
                                   const ForwardTrace* context = nullptr) const override;
  Tensor grad_wrt_layer(std::size_t layer, const Tensor& rep,
                        std::size_t target,
                        const ForwardTrace* context = nullptr) const override;

  std::size_t block_count() const override { return config_.blocks; }
  std::size_t head_count() const override { return config_.heads; }
  std::size_t token_count() const override { return tokens_; }
  AttentionTrace attention_trace(const Tensor& x,
                                 std::size_t target) const override;

  const Config& config() const { return config_; }

 private:
  struct BlockCache;
  struct Cache;

  Tensor embed_tokens(const Tensor& x) const;
  Tensor image_grad_from_tokens(const Tensor& dtokens) const;
  void block_forward(const BlockParams& p, const Tensor& x_in,
                     const Tensor* attn_override, BlockCache& cache) const;
  // Backpropagates dX_out through one block. If `d_attention` is non-null
  // the gradient w.r.t. the block's attention tensor is stored there; when
  // additionally `stop_at_attention` is set, the query/key path is skipped
  // (the attention was an external input).
  Tensor block_backward(const BlockParams& p, const BlockCache& cache,
                        const Tensor& dx_out, Tensor* d_attention,
                        bool stop_at_attention) const;
  std::shared_ptr<Cache> run_forward(const Tensor& x) const;
  std::shared_ptr<Cache> run_override(const Cache& base, std::size_t layer,
                                      const Tensor& attention) const;
  std::vector<double> head_logits(const Cache& cache) const;
  const Cache& require_cache(const ForwardTrace* context) const;

  Config config_;
  std::size_t tokens_;
  Tensor patch_weight_;  // (embed, patch_vec)
  std::vector<double> patch_bias_;
  std::vector<double> cls_token_;
  Tensor pos_embed_;  // (tokens, embed)
  std::vector<BlockParams> blocks_;
  Linear head_;
};

std::shared_ptr<TinyAttention> build_tiny_attention(
    std::uint64_t seed, const TinyAttention::Config& config = {});

}  // namespace bee

#endif  // BEE_TINY_ATTENTION_HPP_
