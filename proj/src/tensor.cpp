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

#include "piiaudit/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>

namespace piiaudit {

void Matrix::AppendRows(ConstMatView other) {
  assert(other.cols == cols_ || rows_ == 0);
  if (rows_ == 0) cols_ = other.cols;
  data_.insert(data_.end(), other.data,
               other.data + static_cast<std::size_t>(other.rows) * other.cols);
  rows_ += other.rows;
}

namespace {

constexpr int kTileCols = 64;

// Computes a rows x cols tile of a*b starting at (i0, j0). kRows is the
// register-blocked row count; both instantiations perform the identical fma
// sequence per element.
template <int kRows>
void Tile(ConstMatView a, ConstMatView b, MatView out, int i0, int j0, int cols,
          bool accumulate) {
  float acc[kRows][kTileCols];
  for (int r = 0; r < kRows; ++r) {
    if (accumulate) {
      std::memcpy(acc[r], out.row(i0 + r) + j0, sizeof(float) * cols);
    } else {
      std::fill_n(acc[r], kTileCols, 0.0f);
    }
  }
  const int depth = a.cols;
  if (cols == kTileCols) {
    for (int p = 0; p < depth; ++p) {
      const float* brow = b.row(p) + j0;
      for (int r = 0; r < kRows; ++r) {
        const float av = a.row(i0 + r)[p];
        for (int j = 0; j < kTileCols; ++j) acc[r][j] = std::fma(av, brow[j], acc[r][j]);
      }
    }
  } else {
    for (int p = 0; p < depth; ++p) {
      const float* brow = b.row(p) + j0;
      for (int r = 0; r < kRows; ++r) {
        const float av = a.row(i0 + r)[p];
        for (int j = 0; j < cols; ++j) acc[r][j] = std::fma(av, brow[j], acc[r][j]);
      }
    }
  }
  for (int r = 0; r < kRows; ++r) {
    std::memcpy(out.row(i0 + r) + j0, acc[r], sizeof(float) * cols);
  }
}

}  // namespace

void MatMul(ConstMatView a, ConstMatView b, MatView out, bool accumulate) {
  assert(a.cols == b.rows && out.rows == a.rows && out.cols == b.cols);
  const int m = a.rows;
  const int n = b.cols;
  int i0 = 0;
  for (; i0 + 4 <= m; i0 += 4) {
    for (int j0 = 0; j0 < n; j0 += kTileCols) {
      Tile<4>(a, b, out, i0, j0, std::min(kTileCols, n - j0), accumulate);
    }
  }
  for (; i0 < m; ++i0) {
    for (int j0 = 0; j0 < n; j0 += kTileCols) {
      Tile<1>(a, b, out, i0, j0, std::min(kTileCols, n - j0), accumulate);
    }
  }
}

void Transpose(ConstMatView in, MatView out) {
  assert(out.rows == in.cols && out.cols == in.rows);
  for (int r = 0; r < in.rows; ++r) {
    const float* src = in.row(r);
    for (int c = 0; c < in.cols; ++c) out.row(c)[r] = src[c];
  }
}

void MatMulTransB(ConstMatView a, ConstMatView b, MatView out, bool accumulate) {
  Matrix bt(b.cols, b.rows);
  Transpose(b, bt);
  MatMul(a, bt, out, accumulate);
}

void MatMulTransA(ConstMatView a, ConstMatView b, MatView out, bool accumulate) {
  Matrix at(a.cols, a.rows);
  Transpose(a, at);
  MatMul(at, b, out, accumulate);
}

}  // namespace piiaudit
