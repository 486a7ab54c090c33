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
#include "bee/tiny_attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bee/patterns.hpp"
#include "bee/rng.hpp"

namespace bee {

struct TinyAttention::BlockCache {
  Tensor x_in;   // (T, d)
  Tensor q, k, v;
  Tensor attn;   // (heads, T, T), the attention actually applied
  Tensor o;      // (T, d) concatenated head outputs
  Tensor x_mid;  // after the attention residual
  Tensor hm;     // (T, mlp) post-tanh
  Tensor x_out;
  bool overridden = false;
};

struct TinyAttention::Cache {
  std::vector<BlockCache> blocks;
  std::vector<double> logits;
};

namespace {

Tensor seeded_matrix(std::size_t rows, std::size_t cols, double scale,
                     Rng& rng) {
  Tensor m({rows, cols});
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = scale * rng.normal();
  return m;
}

void add_row_bias(Tensor& m, const std::vector<double>& bias) {
  for (std::size_t i = 0; i < m.dim(0); ++i)
    for (std::size_t j = 0; j < m.dim(1); ++j) m(i, j) += bias[j];
}

}  // namespace

TinyAttention::TinyAttention(std::uint64_t seed) : TinyAttention(seed, Config()) {}

TinyAttention::TinyAttention(std::uint64_t seed, const Config& config)
    : config_(config) {
  if (config.height % config.patch != 0 || config.width % config.patch != 0)
    throw std::invalid_argument("TinyAttention: patch must tile the input");
  if (config.embed_dim % config.heads != 0)
    throw std::invalid_argument("TinyAttention: heads must divide embed_dim");
  const std::size_t grid =
      (config.height / config.patch) * (config.width / config.patch);
  tokens_ = grid + 1;

  Rng rng(mix_seed(seed ^ 0x5eedbee5ULL));
  const std::size_t patch_vec =
      config.channels * config.patch * config.patch;
  const double d = static_cast<double>(config.embed_dim);
  // Patch projection dominates the class-independent token components so
  // the [CLS] readout stays input-sensitive.
  patch_weight_ =
      seeded_matrix(config.embed_dim, patch_vec,
                    3.0 / std::sqrt(static_cast<double>(patch_vec)), rng);
  patch_bias_.assign(config.embed_dim, 0.0);
  for (double& b : patch_bias_) b = 0.05 * rng.normal();
  cls_token_.assign(config.embed_dim, 0.0);
  for (double& c : cls_token_) c = 0.2 * rng.normal();
  pos_embed_ = seeded_matrix(tokens_, config.embed_dim, 0.1, rng);

  blocks_.resize(config.blocks);
  for (BlockParams& p : blocks_) {
    p.wq = seeded_matrix(config.embed_dim, config.embed_dim, 1.0 / std::sqrt(d), rng);
    p.wk = seeded_matrix(config.embed_dim, config.embed_dim, 1.0 / std::sqrt(d), rng);
    p.wv = seeded_matrix(config.embed_dim, config.embed_dim, 1.0 / std::sqrt(d), rng);
    p.wo = seeded_matrix(config.embed_dim, config.embed_dim, 1.0 / std::sqrt(d), rng);
    p.bo.assign(config.embed_dim, 0.0);
    p.w1 = seeded_matrix(config.embed_dim, config.mlp_dim, 1.0 / std::sqrt(d), rng);
    p.b1.assign(config.mlp_dim, 0.0);
    for (double& b : p.b1) b = 0.05 * rng.normal();
    p.w2 = seeded_matrix(config.mlp_dim, config.embed_dim,
                         1.0 / std::sqrt(static_cast<double>(config.mlp_dim)), rng);
    p.b2.assign(config.embed_dim, 0.0);
  }

  // Nearest-class-mean head on the [CLS] features of the canonical
  // patterns, mirroring the TinyCnn construction.
  head_.weight = Tensor({config.classes, config.embed_dim});
  head_.bias.assign(config.classes, 0.0);
  std::vector<std::vector<double>> feats(config.classes);
  std::vector<double> mean(config.embed_dim, 0.0);
  for (std::size_t c = 0; c < config.classes; ++c) {
    const Tensor proto =
        render_pattern(c, config.channels, config.height, config.width);
    const auto cache = run_forward(proto);
    const Tensor& out = cache->blocks.back().x_out;
    feats[c].resize(config.embed_dim);
    for (std::size_t i = 0; i < config.embed_dim; ++i) {
      feats[c][i] = out(0, i);
      mean[i] += out(0, i) / static_cast<double>(config.classes);
    }
  }
  double spread = 0.0;
  for (std::size_t c = 0; c < config.classes; ++c) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < config.embed_dim; ++i) {
      const double centered = feats[c][i] - mean[i];
      norm2 += centered * centered;
    }
    spread += std::sqrt(norm2) / static_cast<double>(config.classes);
  }
  const double alpha = spread > 1e-12 ? 2.0 / spread : 0.0;
  for (std::size_t c = 0; c < config.classes; ++c) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < config.embed_dim; ++i) {
      head_.weight(c, i) = alpha * (feats[c][i] - mean[i]);
      norm2 += feats[c][i] * feats[c][i];
    }
    head_.bias[c] = -0.5 * alpha * norm2;
  }
}

std::vector<std::size_t> TinyAttention::input_shape() const {
  return {config_.channels, config_.height, config_.width};
}

std::vector<std::size_t> TinyAttention::layer_shape(std::size_t layer) const {
  if (layer == 0) return input_shape();
  if (layer > config_.blocks)
    throw std::invalid_argument("TinyAttention: layer index out of range");
  return {config_.heads, tokens_, tokens_};
}

Tensor TinyAttention::embed_tokens(const Tensor& x) const {
  const std::size_t p = config_.patch;
  const std::size_t gw = config_.width / p;
  const std::size_t grid = tokens_ - 1;
  Tensor tok({tokens_, config_.embed_dim});
  for (std::size_t i = 0; i < config_.embed_dim; ++i)
    tok(0, i) = cls_token_[i] + pos_embed_(0, i);
  for (std::size_t g = 0; g < grid; ++g) {
    const std::size_t gi = g / gw, gj = g % gw;
    for (std::size_t e = 0; e < config_.embed_dim; ++e) {
      double acc = patch_bias_[e];
      for (std::size_t c = 0; c < config_.channels; ++c)
        for (std::size_t di = 0; di < p; ++di)
          for (std::size_t dj = 0; dj < p; ++dj)
            acc += patch_weight_(e, (c * p + di) * p + dj) *
                   x(c, gi * p + di, gj * p + dj);
      tok(g + 1, e) = acc + pos_embed_(g + 1, e);
    }
  }
  return tok;
}

Tensor TinyAttention::image_grad_from_tokens(const Tensor& dtokens) const {
  const std::size_t p = config_.patch;
  const std::size_t gw = config_.width / p;
  Tensor dx({config_.channels, config_.height, config_.width});
  for (std::size_t g = 0; g + 1 < tokens_; ++g) {
    const std::size_t gi = g / gw, gj = g % gw;
    for (std::size_t e = 0; e < config_.embed_dim; ++e) {
      const double de = dtokens(g + 1, e);
      if (de == 0.0) continue;
      for (std::size_t c = 0; c < config_.channels; ++c)
        for (std::size_t di = 0; di < p; ++di)
          for (std::size_t dj = 0; dj < p; ++dj)
            dx(c, gi * p + di, gj * p + dj) +=
                de * patch_weight_(e, (c * p + di) * p + dj);
    }
  }
  return dx;
}

void TinyAttention::block_forward(const BlockParams& p, const Tensor& x_in,
                                  const Tensor* attn_override,
                                  BlockCache& cache) const {
  const std::size_t t = tokens_, heads = config_.heads;
  const std::size_t dh = config_.embed_dim / heads;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

  cache.x_in = x_in;
  cache.q = matmul(x_in, p.wq);
  cache.k = matmul(x_in, p.wk);
  cache.v = matmul(x_in, p.wv);
  cache.overridden = attn_override != nullptr;

  if (attn_override) {
    cache.attn = *attn_override;
  } else {
    cache.attn = Tensor({heads, t, t});
    for (std::size_t h = 0; h < heads; ++h) {
      for (std::size_t i = 0; i < t; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        std::vector<double> row(t);
        for (std::size_t j = 0; j < t; ++j) {
          double s = 0.0;
          for (std::size_t e = 0; e < dh; ++e)
            s += cache.q(i, h * dh + e) * cache.k(j, h * dh + e);
          row[j] = s * inv_sqrt_dh;
          mx = std::max(mx, row[j]);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < t; ++j) {
          row[j] = std::exp(row[j] - mx);
          sum += row[j];
        }
        for (std::size_t j = 0; j < t; ++j) cache.attn(h, i, j) = row[j] / sum;
      }
    }
  }

  cache.o = Tensor({t, config_.embed_dim});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        const double a = cache.attn(h, i, j);
        if (a == 0.0) continue;
        for (std::size_t e = 0; e < dh; ++e)
          cache.o(i, h * dh + e) += a * cache.v(j, h * dh + e);
      }

  Tensor attn_out = matmul(cache.o, p.wo);
  add_row_bias(attn_out, p.bo);
  cache.x_mid = x_in + attn_out;

  Tensor z = matmul(cache.x_mid, p.w1);
  add_row_bias(z, p.b1);
  cache.hm = tanh_map(std::move(z));
  Tensor m = matmul(cache.hm, p.w2);
  add_row_bias(m, p.b2);
  cache.x_out = cache.x_mid + m;
}

Tensor TinyAttention::block_backward(const BlockParams& p,
                                     const BlockCache& cache,
                                     const Tensor& dx_out, Tensor* d_attention,
                                     bool stop_at_attention) const {
  const std::size_t t = tokens_, heads = config_.heads;
  const std::size_t dh = config_.embed_dim / heads;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

  // MLP residual branch.
  Tensor dhm = matmul_nt(dx_out, p.w2);
  for (std::size_t i = 0; i < dhm.size(); ++i)
    dhm[i] *= 1.0 - cache.hm[i] * cache.hm[i];
  Tensor dx_mid = dx_out + matmul_nt(dhm, p.w1);

  // Attention residual branch.
  Tensor dout = matmul_nt(dx_mid, p.wo);  // gradient at O

  Tensor dattn({heads, t, t});
  Tensor dv({t, config_.embed_dim});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        double acc = 0.0;
        for (std::size_t e = 0; e < dh; ++e)
          acc += dout(i, h * dh + e) * cache.v(j, h * dh + e);
        dattn(h, i, j) = acc;
        const double a = cache.attn(h, i, j);
        if (a != 0.0)
          for (std::size_t e = 0; e < dh; ++e)
            dv(j, h * dh + e) += a * dout(i, h * dh + e);
      }
  if (d_attention) *d_attention = dattn;

  Tensor dx = dx_mid + matmul_nt(dv, p.wv);
  if (stop_at_attention) return dx;

  // Softmax backward, then the query/key projections.
  Tensor ds({heads, t, t});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < t; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < t; ++j)
        dot += dattn(h, i, j) * cache.attn(h, i, j);
      for (std::size_t j = 0; j < t; ++j)
        ds(h, i, j) = cache.attn(h, i, j) * (dattn(h, i, j) - dot);
    }

  Tensor dq({t, config_.embed_dim});
  Tensor dk({t, config_.embed_dim});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        const double g = ds(h, i, j) * inv_sqrt_dh;
        if (g == 0.0) continue;
        for (std::size_t e = 0; e < dh; ++e) {
          dq(i, h * dh + e) += g * cache.k(j, h * dh + e);
          dk(j, h * dh + e) += g * cache.q(i, h * dh + e);
        }
      }
  dx += matmul_nt(dq, p.wq);
  dx += matmul_nt(dk, p.wk);
  return dx;
}

std::shared_ptr<TinyAttention::Cache> TinyAttention::run_forward(
    const Tensor& x) const {
  auto cache = std::make_shared<Cache>();
  cache->blocks.resize(config_.blocks);
  Tensor tokens = embed_tokens(x);
  for (std::size_t b = 0; b < config_.blocks; ++b) {
    block_forward(blocks_[b], tokens, nullptr, cache->blocks[b]);
    tokens = cache->blocks[b].x_out;
  }
  cache->logits = head_logits(*cache);
  return cache;
}

std::shared_ptr<TinyAttention::Cache> TinyAttention::run_override(
    const Cache& base, std::size_t layer, const Tensor& attention) const {
  auto cache = std::make_shared<Cache>();
  cache->blocks.resize(config_.blocks);
  const std::size_t b0 = layer - 1;
  for (std::size_t b = 0; b < b0; ++b) cache->blocks[b] = base.blocks[b];
  block_forward(blocks_[b0], base.blocks[b0].x_in, &attention,
                cache->blocks[b0]);
  for (std::size_t b = b0 + 1; b < config_.blocks; ++b)
    block_forward(blocks_[b], cache->blocks[b - 1].x_out, nullptr,
                  cache->blocks[b]);
  cache->logits = head_logits(*cache);
  return cache;
}

std::vector<double> TinyAttention::head_logits(const Cache& cache) const {
  const Tensor& out = cache.blocks.back().x_out;
  std::vector<double> cls(config_.embed_dim);
  for (std::size_t i = 0; i < config_.embed_dim; ++i) cls[i] = out(0, i);
  return linear_forward(head_, cls);
}

const TinyAttention::Cache& TinyAttention::require_cache(
    const ForwardTrace* context) const {
  if (!context || !context->cache)
    throw std::invalid_argument(
        "TinyAttention: attention layers need the forward trace of the "
        "underlying input");
  return *static_cast<const Cache*>(context->cache.get());
}

ForwardTrace TinyAttention::forward(const Tensor& x) const {
  if (x.shape() != input_shape())
    throw std::invalid_argument("TinyAttention: input shape mismatch");
  auto cache = run_forward(x);
  ForwardTrace trace;
  trace.reps.push_back(x);
  for (const BlockCache& b : cache->blocks) trace.reps.push_back(b.attn);
  trace.logits = cache->logits;
  trace.cache = cache;
  return trace;
}

std::vector<double> TinyAttention::forward_from(
    std::size_t layer, const Tensor& rep, const ForwardTrace* context) const {
  if (rep.shape() != layer_shape(layer))
    throw std::invalid_argument("TinyAttention: representation shape mismatch");
  if (layer == 0) return forward(rep).logits;
  return run_override(require_cache(context), layer, rep)->logits;
}

Tensor TinyAttention::grad_wrt_layer(std::size_t layer, const Tensor& rep,
                                     std::size_t target,
                                     const ForwardTrace* context) const {
  if (rep.shape() != layer_shape(layer))
    throw std::invalid_argument("TinyAttention: representation shape mismatch");
  if (target >= config_.classes)
    throw std::invalid_argument("TinyAttention: class index out of range");

  std::shared_ptr<Cache> cache;
  if (layer == 0) {
    cache = run_forward(rep);
  } else {
    cache = run_override(require_cache(context), layer, rep);
  }

  Tensor dtokens({tokens_, config_.embed_dim});
  for (std::size_t i = 0; i < config_.embed_dim; ++i)
    dtokens(0, i) = head_.weight(target, i);

  for (std::size_t b = config_.blocks; b-- > 0;) {
    const bool is_target_block = layer >= 1 && b == layer - 1;
    if (is_target_block) {
      Tensor d_attention;
      block_backward(blocks_[b], cache->blocks[b], dtokens, &d_attention,
                     /*stop_at_attention=*/true);
      return d_attention;
    }
    dtokens = block_backward(blocks_[b], cache->blocks[b], dtokens, nullptr,
                             /*stop_at_attention=*/false);
  }
  return image_grad_from_tokens(dtokens);
}

AttentionTrace TinyAttention::attention_trace(const Tensor& x,
                                              std::size_t target) const {
  if (x.shape() != input_shape())
    throw std::invalid_argument("TinyAttention: input shape mismatch");
  if (target >= config_.classes)
    throw std::invalid_argument("TinyAttention: class index out of range");
  auto cache = run_forward(x);

  AttentionTrace trace;
  trace.attention.resize(config_.blocks);
  trace.grads.resize(config_.blocks);

  Tensor dtokens({tokens_, config_.embed_dim});
  for (std::size_t i = 0; i < config_.embed_dim; ++i)
    dtokens(0, i) = head_.weight(target, i);
  for (std::size_t b = config_.blocks; b-- > 0;) {
    trace.attention[b] = cache->blocks[b].attn;
    dtokens = block_backward(blocks_[b], cache->blocks[b], dtokens,
                             &trace.grads[b], /*stop_at_attention=*/false);
  }
  return trace;
}

std::shared_ptr<TinyAttention> build_tiny_attention(
    std::uint64_t seed, const TinyAttention::Config& config) {
  return std::make_shared<TinyAttention>(seed, config);
}

}  // namespace bee
