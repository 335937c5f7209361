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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace piiaudit {

// Non-owning row-major view.
struct ConstMatView {
  const float* data = nullptr;
  int rows = 0;
  int cols = 0;

  const float* row(int r) const { return data + static_cast<std::size_t>(r) * cols; }
};

struct MatView {
  float* data = nullptr;
  int rows = 0;
  int cols = 0;

  float* row(int r) const { return data + static_cast<std::size_t>(r) * cols; }
  operator ConstMatView() const { return {data, rows, cols}; }
};

// Owning row-major float matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(Size(rows, cols), 0.0f) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  float* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const float* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  float& operator()(int r, int c) { return row(r)[c]; }
  float operator()(int r, int c) const { return row(r)[c]; }
  std::span<const float> values() const { return data_; }

  void Resize(int rows, int cols) {
    rows_ = rows;
    cols_ = cols;
    data_.assign(Size(rows, cols), 0.0f);
  }
  void SetZero() { data_.assign(data_.size(), 0.0f); }
  // Appends rows from another matrix with the same column count.
  void AppendRows(ConstMatView other);

  MatView view() { return {data_.data(), rows_, cols_}; }
  ConstMatView view() const { return {data_.data(), rows_, cols_}; }
  operator MatView() { return view(); }
  operator ConstMatView() const { return view(); }

 private:
  static std::size_t Size(int r, int c) { return static_cast<std::size_t>(r) * c; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> data_;
};

// out = a * b (or out += a * b when accumulate). Every output element is a
// fused multiply-add chain over the inner dimension in ascending order, so a
// row's result never depends on how many other rows share the call.
void MatMul(ConstMatView a, ConstMatView b, MatView out, bool accumulate = false);

// out = a * b^T.
void MatMulTransB(ConstMatView a, ConstMatView b, MatView out, bool accumulate = false);

// out (+)= a^T * b.
void MatMulTransA(ConstMatView a, ConstMatView b, MatView out, bool accumulate = false);

void Transpose(ConstMatView in, MatView out);

// Ascending-order fused dot product.
inline float Dot(const float* a, const float* b, int n) {
  float acc = 0.0f;
  for (int i = 0; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

}  // namespace piiaudit
