// Copyright 2026 The PII Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "piiaudit/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "piiaudit/errors.hpp"
#include "piiaudit/rng.hpp"

namespace piiaudit {
namespace {

constexpr float kLnEps = 1e-5f;
constexpr float kInitStd = 0.02f;
constexpr float kGeluC = 0.7978845608028654f;  // sqrt(2 / pi)

void LayerNormForward(ConstMatView x, const float* gain, const float* bias, MatView out,
                      std::vector<float>* mean_out, std::vector<float>* rstd_out) {
  const int d = x.cols;
  if (mean_out) {
    mean_out->resize(x.rows);
    rstd_out->resize(x.rows);
  }
  for (int r = 0; r < x.rows; ++r) {
    const float* xr = x.row(r);
    float sum = 0.0f;
    for (int i = 0; i < d; ++i) sum += xr[i];
    const float mean = sum / static_cast<float>(d);
    float var = 0.0f;
    for (int i = 0; i < d; ++i) {
      const float c = xr[i] - mean;
      var = std::fma(c, c, var);
    }
    const float rstd = 1.0f / std::sqrt(var / static_cast<float>(d) + kLnEps);
    float* o = out.row(r);
    for (int i = 0; i < d; ++i) o[i] = std::fma((xr[i] - mean) * rstd, gain[i], bias[i]);
    if (mean_out) {
      (*mean_out)[r] = mean;
      (*rstd_out)[r] = rstd;
    }
  }
}

// dx += LayerNorm backward of dy; accumulates gain/bias gradients.
void LayerNormBackward(ConstMatView x, const std::vector<float>& mean,
                       const std::vector<float>& rstd, const float* gain, ConstMatView dy,
                       MatView dx, float* dgain, float* dbias) {
  const int d = x.cols;
  std::vector<float> xhat(d), dxhat(d);
  for (int r = 0; r < x.rows; ++r) {
    const float* xr = x.row(r);
    const float* dyr = dy.row(r);
    float mean_dxhat = 0.0f;
    float mean_dxhat_xhat = 0.0f;
    for (int i = 0; i < d; ++i) {
      xhat[i] = (xr[i] - mean[r]) * rstd[r];
      dxhat[i] = dyr[i] * gain[i];
      mean_dxhat += dxhat[i];
      mean_dxhat_xhat += dxhat[i] * xhat[i];
      if (dgain) {
        dgain[i] += dyr[i] * xhat[i];
        dbias[i] += dyr[i];
      }
    }
    mean_dxhat /= static_cast<float>(d);
    mean_dxhat_xhat /= static_cast<float>(d);
    float* dxr = dx.row(r);
    for (int i = 0; i < d; ++i) {
      dxr[i] += rstd[r] * (dxhat[i] - mean_dxhat - xhat[i] * mean_dxhat_xhat);
    }
  }
}

// exp on [-87, 88] by Cody-Waite reduction and a degree-6 polynomial (about
// 1 ulp). Branch-free so that row loops vectorize; every multiply-add is an
// explicit fma, which keeps vector and scalar lanes bitwise identical.
inline float ExpApprox(float x) {
  x = x < -87.0f ? -87.0f : x;
  x = x > 88.0f ? 88.0f : x;
  const float n = std::floor(std::fma(x, 1.44269504088896341f, 0.5f));
  float r = std::fma(n, -0.693359375f, x);
  r = std::fma(n, 2.12194440e-4f, r);
  float p = 1.9875691500e-4f;
  p = std::fma(p, r, 1.3981999507e-3f);
  p = std::fma(p, r, 8.3334519073e-3f);
  p = std::fma(p, r, 4.1665795894e-2f);
  p = std::fma(p, r, 1.6666665459e-1f);
  p = std::fma(p, r, 5.0000001201e-1f);
  const float y = std::fma(p * r, r, r) + 1.0f;
  const std::int32_t bits = (static_cast<std::int32_t>(n) + 127) << 23;
  return y * std::bit_cast<float>(bits);
}

inline float TanhApprox(float u) { return 1.0f - 2.0f / (ExpApprox(2.0f * u) + 1.0f); }

inline float GeluInner(float x) {
  return kGeluC * std::fma(0.044715f * x, x * x, x);
}

void GeluRow(const float* in, float* out, int n) {
  for (int i = 0; i < n; ++i) {
    const float x = in[i];
    out[i] = 0.5f * x * (1.0f + TanhApprox(GeluInner(x)));
  }
}

// g[i] *= d gelu / dx at pre[i].
void GeluGradRow(const float* pre, float* g, int n) {
  for (int i = 0; i < n; ++i) {
    const float x = pre[i];
    const float t = TanhApprox(GeluInner(x));
    const float slope = kGeluC * std::fma(3.0f * 0.044715f * x, x, 1.0f);
    const float d = std::fma(0.5f * x * std::fma(-t, t, 1.0f), slope, 0.5f * (1.0f + t));
    g[i] *= d;
  }
}

void AddBias(MatView m, const float* bias) {
  for (int r = 0; r < m.rows; ++r) {
    float* row = m.row(r);
    for (int c = 0; c < m.cols; ++c) row[c] += bias[c];
  }
}

void SumRows(ConstMatView m, float* out) {
  for (int r = 0; r < m.rows; ++r) {
    const float* row = m.row(r);
    for (int c = 0; c < m.cols; ++c) out[c] += row[c];
  }
}

MatView GradView(std::span<float> grads, std::size_t offset, int rows, int cols) {
  return {grads.data() + offset, rows, cols};
}

}  // namespace

void ModelConfig::Validate() const {
  if (n_layers <= 0 || n_heads <= 0 || d_model <= 0 || d_ff <= 0 || max_context <= 0 ||
      vocab_size <= 0) {
    throw InvalidArgument("model config fields must all be positive");
  }
  if (d_model % n_heads != 0) {
    throw InvalidArgument("d_model must be divisible by n_heads");
  }
}

Model::Model(const ModelConfig& config) : config_(config) {
  config_.Validate();
  const int d = config_.d_model;
  const int f = config_.d_ff;
  const int v = config_.vocab_size;
  AddTensor("wte", v, d);
  AddTensor("wpe", config_.max_context, d);
  for (int l = 0; l < config_.n_layers; ++l) {
    const std::string p = "layers." + std::to_string(l) + ".";
    LayerOffsets lo{};
    auto add = [&](std::size_t& slot, const char* name, int rows, int cols) {
      AddTensor(p + name, rows, cols);
      slot = tensors_.back().offset;
    };
    add(lo.ln1_g, "ln1.gain", 1, d);
    add(lo.ln1_b, "ln1.bias", 1, d);
    add(lo.w_qkv, "attn.w_qkv", d, 3 * d);
    add(lo.b_qkv, "attn.b_qkv", 1, 3 * d);
    add(lo.w_o, "attn.w_out", d, d);
    add(lo.b_o, "attn.b_out", 1, d);
    add(lo.ln2_g, "ln2.gain", 1, d);
    add(lo.ln2_b, "ln2.bias", 1, d);
    add(lo.w_fc, "mlp.w_fc", d, f);
    add(lo.b_fc, "mlp.b_fc", 1, f);
    add(lo.w_proj, "mlp.w_proj", f, d);
    add(lo.b_proj, "mlp.b_proj", 1, d);
    layers_.push_back(lo);
  }
  AddTensor("lnf.gain", 1, d);
  AddTensor("lnf.bias", 1, d);
  AddTensor("head.weight", d, v);
  AddTensor("head.bias", 1, v);
  wte_ = Info("wte").offset;
  wpe_ = Info("wpe").offset;
  lnf_g_ = Info("lnf.gain").offset;
  lnf_b_ = Info("lnf.bias").offset;
  w_head_ = Info("head.weight").offset;
  b_head_ = Info("head.bias").offset;
  params_.assign(tensors_.empty() ? 0 : tensors_.back().offset + tensors_.back().count(), 0.0f);
}

void Model::AddTensor(std::string name, int rows, int cols) {
  const std::size_t offset = tensors_.empty() ? 0 : tensors_.back().offset + tensors_.back().count();
  tensors_.push_back({std::move(name), rows, cols, offset});
}

Model Model::Initialize(const ModelConfig& config, std::uint64_t seed) {
  Model m(config);
  Rng rng(DeriveSeed(seed, "model.init"));
  for (const auto& t : m.tensors_) {
    const bool is_gain = t.name.ends_with(".gain");
    const bool is_bias = t.name.ends_with(".bias") || t.name.ends_with(".b_qkv") ||
                         t.name.ends_with(".b_out") || t.name.ends_with(".b_fc") ||
                         t.name.ends_with(".b_proj");
    float* p = m.params_.data() + t.offset;
    for (std::size_t i = 0; i < t.count(); ++i) {
      p[i] = is_gain ? 1.0f : is_bias ? 0.0f : rng.Normal(kInitStd);
    }
  }
  return m;
}

const TensorInfo& Model::Info(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return t;
  }
  throw InvalidArgument("unknown tensor: " + std::string(name));
}

ConstMatView Model::Tensor(std::string_view name) const {
  const auto& t = Info(name);
  return At(t.offset, t.rows, t.cols);
}

MatView Model::MutableTensor(std::string_view name) {
  const auto& t = Info(name);
  return {params_.data() + t.offset, t.rows, t.cols};
}

Matrix Model::Forward(std::span<const TokenId> ids) const {
  std::vector<std::vector<TokenId>> seqs{std::vector<TokenId>(ids.begin(), ids.end())};
  return Run(seqs, nullptr, nullptr, nullptr, {});
}

Matrix Model::ForwardBatch(std::span<const std::vector<TokenId>> sequences, const KvCache* prefix,
                           std::span<const int> logit_rows) const {
  return Run(sequences, prefix, nullptr, nullptr, logit_rows);
}

KvCache Model::Prefill(std::span<const TokenId> ids, std::vector<float>* last_logits) const {
  KvCache cache;
  cache.keys.assign(config_.n_layers, Matrix(0, config_.d_model));
  cache.values.assign(config_.n_layers, Matrix(0, config_.d_model));
  auto logits = Extend(cache, ids);
  if (last_logits) *last_logits = std::move(logits);
  return cache;
}

std::vector<float> Model::Extend(KvCache& cache, std::span<const TokenId> ids) const {
  std::vector<std::vector<TokenId>> seqs{std::vector<TokenId>(ids.begin(), ids.end())};
  const int last = static_cast<int>(ids.size()) - 1;
  Matrix logits = Run(seqs, &cache, &cache, nullptr, std::span<const int>(&last, 1));
  return {logits.data(), logits.data() + logits.cols()};
}

Matrix Model::ForwardTraining(std::span<const std::vector<TokenId>> sequences,
                              ForwardTape& tape) const {
  return Run(sequences, nullptr, nullptr, &tape, {});
}

Matrix Model::Run(std::span<const std::vector<TokenId>> sequences, const KvCache* prefix,
                  KvCache* append, ForwardTape* tape, std::span<const int> logit_rows) const {
  const int d = config_.d_model;
  const int f = config_.d_ff;
  const int v = config_.vocab_size;
  const int heads = config_.n_heads;
  const int dh = config_.head_dim();
  const int past = prefix ? prefix->length : 0;
  if (sequences.empty()) throw InvalidArgument("forward needs at least one sequence");
  if (append && sequences.size() != 1) throw InvalidArgument("cache extension takes one sequence");

  std::vector<int> offsets{0};
  for (const auto& s : sequences) {
    if (s.empty()) throw InvalidArgument("forward on an empty sequence");
    if (past + static_cast<int>(s.size()) > config_.max_context) {
      throw InvalidArgument("sequence of length " + std::to_string(past + s.size()) +
                            " exceeds max_context " + std::to_string(config_.max_context));
    }
    for (TokenId id : s) {
      if (id < 0 || id >= v) throw InvalidArgument("token id " + std::to_string(id) + " out of range");
    }
    offsets.push_back(offsets.back() + static_cast<int>(s.size()));
  }
  const int n_rows = offsets.back();

  Matrix x(n_rows, d);
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    for (int j = 0; j < static_cast<int>(sequences[s].size()); ++j) {
      const float* te = params_.data() + wte_ + static_cast<std::size_t>(sequences[s][j]) * d;
      const float* pe = params_.data() + wpe_ + static_cast<std::size_t>(past + j) * d;
      float* xr = x.row(offsets[s] + j);
      for (int i = 0; i < d; ++i) xr[i] = te[i] + pe[i];
    }
  }
  if (tape) {
    tape->seq_offsets = offsets;
    tape->layers.assign(config_.n_layers, {});
    tape->ids.clear();
    tape->positions.clear();
    for (const auto& s : sequences) {
      for (int j = 0; j < static_cast<int>(s.size()); ++j) {
        tape->ids.push_back(s[j]);
        tape->positions.push_back(past + j);
      }
    }
  }

  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  Matrix ln(n_rows, d), qkv(n_rows, 3 * d), attn(n_rows, d), proj(n_rows, d);
  Matrix fc(n_rows, f), act(n_rows, f);
  std::vector<float> scores, keys_t;

  for (int l = 0; l < config_.n_layers; ++l) {
    const LayerOffsets& lo = layers_[l];
    ForwardTape::Layer* tl = tape ? &tape->layers[l] : nullptr;
    if (tl) tl->x_in = x;

    LayerNormForward(x, params_.data() + lo.ln1_g, params_.data() + lo.ln1_b, ln,
                     tl ? &tl->ln1_mean : nullptr, tl ? &tl->ln1_rstd : nullptr);
    MatMul(ln, At(lo.w_qkv, d, 3 * d), qkv);
    AddBias(qkv, params_.data() + lo.b_qkv);

    std::size_t prob_base = 0;
    if (tl) {
      std::size_t total = 0;
      for (std::size_t s = 0; s < sequences.size(); ++s) {
        const std::size_t n = sequences[s].size();
        total += n * n * heads;
      }
      tl->probs.assign(total, 0.0f);
    }
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      const int n = static_cast<int>(sequences[s].size());
      const int o = offsets[s];
      const int span = past + n;
      for (int h = 0; h < heads; ++h) {
        // Keys of this head transposed to dh x span so that scores vectorize
        // across positions; each score keeps the ascending fma order of Dot.
        keys_t.resize(static_cast<std::size_t>(dh) * span);
        for (int j = 0; j < span; ++j) {
          const float* k = j < past ? prefix->keys[l].row(j) + h * dh
                                    : qkv.row(o + j - past) + d + h * dh;
          for (int c = 0; c < dh; ++c) keys_t[static_cast<std::size_t>(c) * span + j] = k[c];
        }
        for (int i = 0; i < n; ++i) {
          const float* q = qkv.row(o + i) + h * dh;
          const int total = past + i + 1;
          scores.assign(total, 0.0f);
          float* sc = scores.data();
          for (int c = 0; c < dh; ++c) {
            const float qc = q[c];
            const float* kc = keys_t.data() + static_cast<std::size_t>(c) * span;
            for (int j = 0; j < total; ++j) sc[j] = std::fma(qc, kc[j], sc[j]);
          }
          float mx = -std::numeric_limits<float>::infinity();
          for (int j = 0; j < total; ++j) {
            sc[j] *= scale;
            mx = std::max(mx, sc[j]);
          }
          float sum = 0.0f;
          for (int j = 0; j < total; ++j) {
            scores[j] = std::exp(scores[j] - mx);
            sum += scores[j];
          }
          const float inv = 1.0f / sum;
          float* out = attn.row(o + i) + h * dh;
          std::fill_n(out, dh, 0.0f);
          for (int j = 0; j < total; ++j) {
            const float p = scores[j] * inv;
            const float* val = j < past ? prefix->values[l].row(j) + h * dh
                                        : qkv.row(o + j - past) + 2 * d + h * dh;
            for (int c = 0; c < dh; ++c) out[c] = std::fma(p, val[c], out[c]);
            if (tl) tl->probs[prob_base + static_cast<std::size_t>(h) * n * n + i * n + j] = p;
          }
        }
      }
      if (tl) prob_base += static_cast<std::size_t>(n) * n * heads;
    }
    if (append) {
      Matrix k(n_rows, d), val(n_rows, d);
      for (int r = 0; r < n_rows; ++r) {
        std::copy_n(qkv.row(r) + d, d, k.row(r));
        std::copy_n(qkv.row(r) + 2 * d, d, val.row(r));
      }
      append->keys[l].AppendRows(k);
      append->values[l].AppendRows(val);
    }
    if (tl) {
      tl->ln1 = ln;
      tl->qkv = qkv;
      tl->attn = attn;
    }

    MatMul(attn, At(lo.w_o, d, d), proj);
    AddBias(proj, params_.data() + lo.b_o);
    for (int r = 0; r < n_rows; ++r) {
      float* xr = x.row(r);
      const float* pr = proj.row(r);
      for (int i = 0; i < d; ++i) xr[i] += pr[i];
    }
    if (tl) tl->x_mid = x;

    LayerNormForward(x, params_.data() + lo.ln2_g, params_.data() + lo.ln2_b, ln,
                     tl ? &tl->ln2_mean : nullptr, tl ? &tl->ln2_rstd : nullptr);
    MatMul(ln, At(lo.w_fc, d, f), fc);
    AddBias(fc, params_.data() + lo.b_fc);
    for (int r = 0; r < n_rows; ++r) {
      GeluRow(fc.row(r), act.row(r), f);
    }
    MatMul(act, At(lo.w_proj, f, d), proj);
    AddBias(proj, params_.data() + lo.b_proj);
    for (int r = 0; r < n_rows; ++r) {
      float* xr = x.row(r);
      const float* pr = proj.row(r);
      for (int i = 0; i < d; ++i) xr[i] += pr[i];
    }
    if (tl) {
      tl->ln2 = ln;
      tl->fc_pre = fc;
      tl->fc_act = act;
    }
  }
  if (append) append->length += n_rows;

  Matrix final_ln(n_rows, d);
  LayerNormForward(x, params_.data() + lnf_g_, params_.data() + lnf_b_, final_ln,
                   tape ? &tape->lnf_mean : nullptr, tape ? &tape->lnf_rstd : nullptr);
  if (tape) {
    tape->x_final = x;
    tape->lnf = final_ln;
  }

  Matrix logits;
  if (logit_rows.empty()) {
    logits.Resize(n_rows, v);
    MatMul(final_ln, At(w_head_, d, v), logits);
  } else {
    Matrix picked(static_cast<int>(logit_rows.size()), d);
    for (std::size_t i = 0; i < logit_rows.size(); ++i) {
      if (logit_rows[i] < 0 || logit_rows[i] >= n_rows) throw InvalidArgument("logit row out of range");
      std::copy_n(final_ln.row(logit_rows[i]), d, picked.row(static_cast<int>(i)));
    }
    logits.Resize(picked.rows(), v);
    MatMul(picked, At(w_head_, d, v), logits);
  }
  AddBias(logits, params_.data() + b_head_);
  return logits;
}

Matrix Model::Backward(const ForwardTape& tape, ConstMatView dlogits, std::span<float> grads) const {
  const int d = config_.d_model;
  const int f = config_.d_ff;
  const int v = config_.vocab_size;
  const int heads = config_.n_heads;
  const int dh = config_.head_dim();
  const int n_rows = tape.rows();
  // An empty gradient buffer skips parameter gradients and only propagates
  // to the input embeddings.
  const bool want = !grads.empty();
  if (want && grads.size() != params_.size()) throw InvalidArgument("gradient buffer has wrong size");
  if (dlogits.rows != n_rows || dlogits.cols != v) throw InvalidArgument("dlogits shape mismatch");

  if (want) {
    MatMulTransA(tape.lnf, dlogits, GradView(grads, w_head_, d, v), true);
    SumRows(dlogits, grads.data() + b_head_);
  }
  Matrix dln(n_rows, d);
  MatMulTransB(dlogits, At(w_head_, d, v), dln);
  Matrix dx(n_rows, d);
  LayerNormBackward(tape.x_final, tape.lnf_mean, tape.lnf_rstd, params_.data() + lnf_g_, dln, dx,
                    want ? grads.data() + lnf_g_ : nullptr, want ? grads.data() + lnf_b_ : nullptr);

  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  Matrix dact(n_rows, f), dqkv(n_rows, 3 * d), dattn(n_rows, d);
  for (int l = config_.n_layers - 1; l >= 0; --l) {
    const LayerOffsets& lo = layers_[l];
    const ForwardTape::Layer& tl = tape.layers[l];

    // MLP block.
    if (want) {
      MatMulTransA(tl.fc_act, dx, GradView(grads, lo.w_proj, f, d), true);
      SumRows(dx, grads.data() + lo.b_proj);
    }
    MatMulTransB(dx, At(lo.w_proj, f, d), dact);
    for (int r = 0; r < n_rows; ++r) {
      GeluGradRow(tl.fc_pre.row(r), dact.row(r), f);
    }
    if (want) {
      MatMulTransA(tl.ln2, dact, GradView(grads, lo.w_fc, d, f), true);
      SumRows(dact, grads.data() + lo.b_fc);
    }
    MatMulTransB(dact, At(lo.w_fc, d, f), dln);
    LayerNormBackward(tl.x_mid, tl.ln2_mean, tl.ln2_rstd, params_.data() + lo.ln2_g, dln, dx,
                      want ? grads.data() + lo.ln2_g : nullptr,
                      want ? grads.data() + lo.ln2_b : nullptr);

    // Attention block.
    if (want) {
      MatMulTransA(tl.attn, dx, GradView(grads, lo.w_o, d, d), true);
      SumRows(dx, grads.data() + lo.b_o);
    }
    MatMulTransB(dx, At(lo.w_o, d, d), dattn);
    dqkv.SetZero();
    std::size_t prob_base = 0;
    std::vector<float> dp;
    for (std::size_t s = 0; s + 1 < tape.seq_offsets.size(); ++s) {
      const int o = tape.seq_offsets[s];
      const int n = tape.seq_offsets[s + 1] - o;
      dp.resize(n);
      for (int h = 0; h < heads; ++h) {
        const float* probs = tl.probs.data() + prob_base + static_cast<std::size_t>(h) * n * n;
        for (int i = 0; i < n; ++i) {
          const float* dout = dattn.row(o + i) + h * dh;
          const float* p = probs + static_cast<std::size_t>(i) * n;
          float dot_sum = 0.0f;
          for (int j = 0; j <= i; ++j) {
            const float* val = tl.qkv.row(o + j) + 2 * d + h * dh;
            dp[j] = Dot(dout, val, dh);
            dot_sum += p[j] * dp[j];
            float* dval = dqkv.row(o + j) + 2 * d + h * dh;
            for (int c = 0; c < dh; ++c) dval[c] += p[j] * dout[c];
          }
          const float* q = tl.qkv.row(o + i) + h * dh;
          float* dq = dqkv.row(o + i) + h * dh;
          for (int j = 0; j <= i; ++j) {
            const float ds = p[j] * (dp[j] - dot_sum) * scale;
            const float* k = tl.qkv.row(o + j) + d + h * dh;
            float* dk = dqkv.row(o + j) + d + h * dh;
            for (int c = 0; c < dh; ++c) {
              dq[c] += ds * k[c];
              dk[c] += ds * q[c];
            }
          }
        }
      }
      prob_base += static_cast<std::size_t>(n) * n * heads;
    }
    if (want) {
      MatMulTransA(tl.ln1, dqkv, GradView(grads, lo.w_qkv, d, 3 * d), true);
      SumRows(dqkv, grads.data() + lo.b_qkv);
    }
    MatMulTransB(dqkv, At(lo.w_qkv, d, 3 * d), dln);
    LayerNormBackward(tl.x_in, tl.ln1_mean, tl.ln1_rstd, params_.data() + lo.ln1_g, dln, dx,
                      want ? grads.data() + lo.ln1_g : nullptr,
                      want ? grads.data() + lo.ln1_b : nullptr);
  }
  for (int r = 0; want && r < n_rows; ++r) {
    float* te = grads.data() + wte_ + static_cast<std::size_t>(tape.ids[r]) * d;
    float* pe = grads.data() + wpe_ + static_cast<std::size_t>(tape.positions[r]) * d;
    const float* g = dx.row(r);
    for (int i = 0; i < d; ++i) {
      te[i] += g[i];
      pe[i] += g[i];
    }
  }
  return dx;
}

double TokenNll(std::span<const float> logits_row, TokenId target) {
  double mx = -std::numeric_limits<double>::infinity();
  for (float x : logits_row) mx = std::max(mx, static_cast<double>(x));
  double sum = 0.0;
  for (float x : logits_row) sum += std::exp(static_cast<double>(x) - mx);
  return mx + std::log(sum) - static_cast<double>(logits_row[target]);
}

double NllGradient(std::span<const float> logits_row, TokenId target, float scale,
                   std::span<float> out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (float x : logits_row) mx = std::max(mx, static_cast<double>(x));
  double sum = 0.0;
  for (float x : logits_row) sum += std::exp(static_cast<double>(x) - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < logits_row.size(); ++i) {
    out[i] = static_cast<float>(std::exp(static_cast<double>(logits_row[i]) - lse)) * scale;
  }
  out[target] -= scale;
  return lse - static_cast<double>(logits_row[target]);
}

}  // namespace piiaudit
