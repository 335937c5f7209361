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

#pragma once

// Straight-line double-precision re-implementation of the decoder forward
// pass. Test-only: shares nothing with the production kernels except the
// parameter layout, which it reads by tensor name.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "piiaudit/model.hpp"

namespace piiaudit::oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline Mat Load(const Model& m, const std::string& name) {
  ConstMatView t = m.Tensor(name);
  Mat out(t.rows, Vec(t.cols));
  for (int r = 0; r < t.rows; ++r)
    for (int c = 0; c < t.cols; ++c) out[r][c] = t.row(r)[c];
  return out;
}

inline Vec Affine(const Vec& x, const Mat& w, const Vec& b) {
  Vec y = b;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += x[i] * w[i][j];
  return y;
}

inline Vec LayerNorm(const Vec& x, const Vec& g, const Vec& b) {
  double mean = 0;
  for (double v : x) mean += v;
  mean /= x.size();
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size();
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - mean) / std::sqrt(var + 1e-5) * g[i] + b[i];
  return y;
}

inline double Gelu(double x) {
  return 0.5 * x * (1 + std::tanh(std::sqrt(2 / M_PI) * (x + 0.044715 * x * x * x)));
}

// Input embeddings (token + position) for a sequence.
inline Mat Embed(const Model& m, std::span<const TokenId> ids) {
  Mat wte = Load(m, "wte"), wpe = Load(m, "wpe");
  Mat x(ids.size(), Vec(m.config().d_model));
  for (std::size_t t = 0; t < ids.size(); ++t)
    for (int i = 0; i < m.config().d_model; ++i) x[t][i] = wte[ids[t]][i] + wpe[t][i];
  return x;
}

// Logits for every position given explicit input embeddings.
inline Mat LogitsFromEmbeddings(const Model& m, Mat x) {
  const auto& c = m.config();
  const int d = c.d_model, nh = c.n_heads, dh = d / nh;
  const std::size_t n = x.size();
  for (int l = 0; l < c.n_layers; ++l) {
    const std::string p = "layers." + std::to_string(l) + ".";
    Vec g1 = Load(m, p + "ln1.gain")[0], b1 = Load(m, p + "ln1.bias")[0];
    Mat wqkv = Load(m, p + "attn.w_qkv");
    Vec bqkv = Load(m, p + "attn.b_qkv")[0];
    Mat wo = Load(m, p + "attn.w_out");
    Vec bo = Load(m, p + "attn.b_out")[0];
    Vec g2 = Load(m, p + "ln2.gain")[0], b2 = Load(m, p + "ln2.bias")[0];
    Mat wfc = Load(m, p + "mlp.w_fc");
    Vec bfc = Load(m, p + "mlp.b_fc")[0];
    Mat wpr = Load(m, p + "mlp.w_proj");
    Vec bpr = Load(m, p + "mlp.b_proj")[0];

    Mat qkv(n);
    for (std::size_t t = 0; t < n; ++t) qkv[t] = Affine(LayerNorm(x[t], g1, b1), wqkv, bqkv);
    Mat att(n, Vec(d, 0.0));
    for (int h = 0; h < nh; ++h) {
      for (std::size_t i = 0; i < n; ++i) {
        Vec s(i + 1);
        double mx = -1e300;
        for (std::size_t j = 0; j <= i; ++j) {
          double dot = 0;
          for (int k = 0; k < dh; ++k) dot += qkv[i][h * dh + k] * qkv[j][d + h * dh + k];
          s[j] = dot / std::sqrt(static_cast<double>(dh));
          mx = std::max(mx, s[j]);
        }
        double z = 0;
        for (auto& v : s) z += (v = std::exp(v - mx));
        for (std::size_t j = 0; j <= i; ++j)
          for (int k = 0; k < dh; ++k) att[i][h * dh + k] += s[j] / z * qkv[j][2 * d + h * dh + k];
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      Vec y = Affine(att[t], wo, bo);
      for (int i = 0; i < d; ++i) x[t][i] += y[i];
      Vec u = Affine(LayerNorm(x[t], g2, b2), wfc, bfc);
      for (auto& v : u) v = Gelu(v);
      Vec z = Affine(u, wpr, bpr);
      for (int i = 0; i < d; ++i) x[t][i] += z[i];
    }
  }
  Vec gf = Load(m, "lnf.gain")[0], bf = Load(m, "lnf.bias")[0];
  Mat wh = Load(m, "head.weight");
  Vec bh = Load(m, "head.bias")[0];
  Mat logits(n);
  for (std::size_t t = 0; t < n; ++t) logits[t] = Affine(LayerNorm(x[t], gf, bf), wh, bh);
  return logits;
}

inline Mat Logits(const Model& m, std::span<const TokenId> ids) {
  return LogitsFromEmbeddings(m, Embed(m, ids));
}

inline double LogSoftmaxAt(const Vec& row, int target) {
  double mx = -1e300;
  for (double v : row) mx = std::max(mx, v);
  double z = 0;
  for (double v : row) z += std::exp(v - mx);
  return row[target] - mx - std::log(z);
}

// Mean NLL of ids[begin, end) from explicit input embeddings.
inline double SpanLoss(const Model& m, std::span<const TokenId> ids, const Mat& emb, int begin, int end) {
  Mat logits = LogitsFromEmbeddings(m, emb);
  double total = 0;
  for (int t = begin; t < end; ++t) total -= LogSoftmaxAt(logits[t - 1], ids[t]);
  return total / (end - begin);
}

}  // namespace piiaudit::oracle
